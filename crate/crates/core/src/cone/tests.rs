use proptest::prelude::*;

use super::*;
use crate::gen;

fn s(v: &[&[f64]]) -> Simplex {
    Simplex::new(v.iter().map(|x| x.to_vec()).collect()).unwrap()
}

fn ch(n: usize, k: usize, items: &[(Simplex, i64)]) -> SimplicialChain {
    SimplicialChain::new(n, k, items.iter().cloned()).unwrap()
}

fn p(v: u64) -> Modulus {
    Modulus::new(v).unwrap()
}

#[test]
fn boundary_examples() {
    let (a, b, c): (&[f64], &[f64], &[f64]) = (&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]);
    let tri = ch(2, 2, &[(s(&[a, b, c]), 1)]);
    let expected = ch(2, 1, &[(s(&[b, c]), 1), (s(&[a, c]), -1), (s(&[a, b]), 1)]);
    assert_eq!(boundary_simplicial(&tri).unwrap(), expected);

    let seg = ch(2, 1, &[(s(&[a, b]), 1)]);
    assert_eq!(boundary_simplicial(&seg).unwrap(), ch(2, 0, &[(s(&[b]), 1), (s(&[a]), -1)]));

    let tet = ch(
        3,
        3,
        &[(s(&[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]), 1)],
    );
    let bd = boundary_simplicial(&tet).unwrap();
    assert_eq!(bd.len(), 4);
    assert!(boundary_simplicial(&bd).unwrap().is_zero());
    assert_eq!(boundary_simplicial(&ch(2, 0, &[(s(&[a]), 1)])), Err(ConeError::NoBoundaryInDimensionZero));
}

#[test]
fn orientation_and_degenerates() {
    let (a, b, c): (&[f64], &[f64], &[f64]) = (&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]);
    assert_eq!(ch(2, 2, &[(s(&[a, b, c]), 1)]), ch(2, 2, &[(s(&[b, a, c]), -1)]));
    assert!(ch(2, 2, &[(s(&[a, b, c]), 1), (s(&[c, b, a]), 1)]).is_zero());
    assert!(ch(2, 1, &[(s(&[a, a]), 3)]).is_zero());
    assert!(ch(2, 2, &[(s(&[a, b, &[2.0, 0.0]]), 1)]).is_zero());
    assert_eq!(s(&[a, b, c]).volume(), 0.5);
    assert_eq!(s(&[a]).volume(), 1.0);
    assert!(Simplex::new(vec![vec![0.0], vec![1.0], vec![2.0]]).is_err());
}

#[test]
fn cone_examples() {
    let x = [0.0, 0.0];
    let pt = ch(2, 0, &[(s(&[&[1.0, 2.0]]), 1)]);
    let seg = cone(&x, &pt).unwrap();
    assert_eq!(seg, ch(2, 1, &[(s(&[&x, &[1.0, 2.0]]), 1)]));
    let expected = ch(2, 0, &[(s(&[&[1.0, 2.0]]), 1), (s(&[&x]), -1)]);
    assert_eq!(boundary_simplicial(&seg).unwrap(), expected);

    let e = ch(2, 1, &[(s(&[&[1.0, 0.0], &[1.0, 1.0]]), 1)]);
    let tri = cone(&x, &e).unwrap();
    assert_eq!(tri.mass(), 0.5);
    let rep = cone_mass_report(&x, &e, p(2)).unwrap();
    assert_eq!(rep.r, 2f64.sqrt());
    assert_eq!(rep.mass, 0.5);
    assert!(rep.mass <= rep.bound);

    let (a, b, c): (&[f64], &[f64], &[f64]) = (&[0.0, 0.0], &[3.0, 0.0], &[0.0, 3.0]);
    let tri = ch(2, 2, &[(s(&[a, b, c]), 1)]);
    let bd = boundary_simplicial(&tri).unwrap();
    let fan = cone(&[1.0, 1.0], &bd).unwrap();
    assert_eq!(fan.len(), 3);
    assert_eq!(boundary_simplicial(&fan).unwrap(), bd);

    assert!(matches!(cone(&x, &tri), Err(ConeError::DimensionTooLarge { .. })));
    assert!(matches!(cone(&[0.0], &e), Err(ConeError::AmbientMismatch { .. })));
}

#[test]
fn report_edge_cases() {
    let rep = cone_mass_report(&[0.0, 0.0], &SimplicialChain::zero(2, 1), p(3)).unwrap();
    assert_eq!((rep.mass, rep.mass_p, rep.bound), (0.0, 0.0, 0.0));
    let e = ch(2, 1, &[(s(&[&[1.0, 0.0], &[1.0, 1.0]]), 2)]);
    let rep = cone_mass_report(&[0.0, 0.0], &e, p(2)).unwrap();
    assert_eq!((rep.mass_p, rep.bound_p), (0.0, 0.0));
    assert_eq!(rep.mass, 1.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cone_boundary_identity(seed in any::<u64>(), n in 2usize..=3, k in 0usize..=2) {
        prop_assume!(k + 1 <= n);
        let mut rng = gen::rng(seed);
        let t = gen::random_simplicial_chain(&mut rng, n, k, 6, 6, 3);
        let x = gen::random_point(&mut rng, n);
        let c = cone(&x, &t).unwrap();
        let rhs = if k == 0 {
            let apex = SimplicialChain::new(n, 0, [(Simplex::new(vec![x.clone()]).unwrap(), t.total_coefficient())]).unwrap();
            &t - &apex
        } else {
            &t - &cone(&x, &boundary_simplicial(&t).unwrap()).unwrap()
        };
        prop_assert_eq!(boundary_simplicial(&c).unwrap(), rhs);
        prop_assert!(cone(&x, &c).map_or(true, |cc| cc.is_zero()));
        if k >= 1 {
            prop_assert!(boundary_simplicial(&boundary_simplicial(&c).unwrap()).map_or(true, |z| z.is_zero()));
        }
    }

    #[test]
    fn cone_mass_bounds(seed in any::<u64>(), n in 2usize..=3, k in 0usize..=2, q in prop::sample::select(vec![2u64, 3, 5])) {
        prop_assume!(k + 1 <= n);
        let mut rng = gen::rng(seed);
        let t = gen::random_simplicial_chain(&mut rng, n, k, 6, 6, 4);
        let x = gen::random_point(&mut rng, n);
        let rep = cone_mass_report(&x, &t, p(q)).unwrap();
        prop_assert!(rep.mass_p <= rep.mass);
    }
}
