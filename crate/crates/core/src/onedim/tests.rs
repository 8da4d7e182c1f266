use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::chain::{Complex, IntChain, Modulus};
use crate::cubical::Grid;
use crate::gen;

fn p(v: u64) -> Modulus {
    Modulus::new(v).unwrap()
}

fn sys(items: &[(&str, &str)]) -> CurveSystem {
    CurveSystem::new(items.iter().map(|&(s, e)| (s, e, 1.0))).unwrap()
}

fn bd(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[test]
fn boundary_examples() {
    assert_eq!(system_boundary(&sys(&[("a", "b")])), bd(&[("a", -1), ("b", 1)]));
    assert!(system_boundary(&sys(&[("a", "b"), ("b", "a")])).is_empty());
    assert_eq!(
        system_boundary(&sys(&[("a", "b"), ("a", "b"), ("a", "b")])),
        bd(&[("a", -3), ("b", 3)])
    );
}

#[test]
fn preprocess_examples() {
    let s = CurveSystem::new([("a", "b", 1.0), ("b", "c", 2.5)]).unwrap();
    let pre = preprocess(&s);
    assert_eq!(pre.system, CurveSystem::new([("a", "c", 3.5)]).unwrap());
    assert_eq!(pre.trace, vec![vec![1, 2]]);

    let pre = preprocess(&sys(&[("a", "a")]));
    assert!(pre.system.is_empty());
    assert_eq!(pre.loops, vec![vec![1]]);

    let s = sys(&[("a", "b"), ("c", "d")]);
    let pre = preprocess(&s);
    assert_eq!(pre.system, s);
    assert_eq!(pre.trace, vec![vec![1], vec![2]]);
}

#[test]
fn extraction_examples() {
    let two = sys(&[("a", "b"), ("a", "b")]);
    let cut = extract_cycle_indices(&two, p(2)).unwrap();
    assert_eq!(cut.gamma1, vec![1]);
    for g in [1, 2] {
        assert!(weighted_boundary(&two, |id| if id == g { -1 } else { 1 }).is_empty());
    }
    let cut = extract_cycle_indices(&sys(&[("a", "b"), ("a", "b"), ("a", "b")]), p(3)).unwrap();
    assert_eq!(cut.gamma1, vec![1]);
    assert!(cut.output_mass <= cut.mass_bound);
    let cut = extract_cycle_indices(&CurveSystem::default(), p(5)).unwrap();
    assert!(cut.gamma1.is_empty());
    let err = extract_cycle_indices(&sys(&[("a", "b")]), p(2)).unwrap_err();
    assert_eq!(
        err,
        OneDimError::NotDivisible {
            point: "a".into(),
            coefficient: -1,
            p: 2
        }
    );
}

#[test]
fn reroute_case_is_exercised() {
    // Two paths a→m→b side by side, p = 2: the first reduction meets S₁ of
    // length three after merging.
    let s = sys(&[("a", "x"), ("y", "x"), ("y", "b"), ("a", "z"), ("w", "z"), ("w", "b")]);
    let cut = extract_cycle_indices(&s, p(2)).unwrap();
    assert!(cut.steps >= 1);
    let weight = |id: usize| if cut.gamma1.contains(&id) { -1 } else { 1 };
    assert!(weighted_boundary(&s, weight).is_empty());
}

fn graph(w: usize, h: usize) -> Arc<Complex> {
    let axis = |c: usize| (0..=c).map(|i| i as f64).collect();
    Grid::new(vec![axis(w), axis(h)]).complex(1).complex
}

fn edge_sum(walks: &[EdgeWalk], c: &Arc<Complex>) -> IntChain {
    walks.iter().fold(IntChain::zero(c, 1), |acc, w| &acc + &w.chain(c))
}

#[test]
fn decompose_examples() {
    let c = Grid::new(vec![vec![0.0, 1.0], vec![0.0, 1.0]]).complex(2).complex;
    let sq = IntChain::from_coeffs(&c, 2, [(0, 1)]).unwrap();
    let cycle = sq.boundary().unwrap();
    let walks = decompose_paths_loops(&cycle).unwrap();
    assert_eq!(walks.len(), 1);
    assert!(walks[0].closed);
    assert_eq!(walks[0].edges.len(), 4);

    let doubled = IntChain::from_coeffs(&c, 1, [(0, 2)]).unwrap();
    let walks = decompose_paths_loops(&doubled).unwrap();
    assert_eq!(walks.len(), 2);
    assert_eq!(walks[0], walks[1]);
    assert!(!walks[0].closed);

    // Figure eight: two unit squares sharing the vertex (1,1).
    let c = graph(2, 2);
    let g = Grid::new(vec![vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0]]).complex(2);
    let both = IntChain::from_coeffs(&g.complex, 2, [(0, 1), (3, 1)]).unwrap();
    let eight = both.boundary().unwrap();
    let eight = IntChain::from_coeffs(&c, 1, eight.iter().map(|(i, g)| (i, g.clone()))).unwrap();
    let walks = decompose_paths_loops(&eight).unwrap();
    assert_eq!(walks.len(), 2);
    assert!(walks.iter().all(|w| w.closed));
    assert_eq!(walks.iter().map(|w| w.mass).sum::<f64>(), eight.mass());
    assert_eq!(edge_sum(&walks, &c), eight);
    assert!(decompose_paths_loops(&IntChain::zero(&c, 1)).unwrap().is_empty());
}

#[test]
fn representative_examples() {
    let c = graph(1, 1);
    // Two paths (0,0) → (1,1), one along each side of the square.
    let lower = [("[0,1]x{0}", 1), ("{1}x[0,1]", 1)];
    let upper = [("{0}x[0,1]", 1), ("[0,1]x{1}", 1)];
    let t = IntChain::from_labels(&c, 1, lower.iter().chain(&upper).map(|&(l, g)| (l, g))).unwrap();
    let r = cycle_representative(&t, p(2)).unwrap();
    assert!(r.boundary().unwrap().is_zero());
    assert!(r.congruent(&t, p(2)));
    assert_eq!(r.support_len(), 4);
    assert!(r.mass() <= t.mass_p(p(2)));

    let q = IntChain::from_labels(&c, 1, [("[0,1]x{0}", 1)]).unwrap();
    let r = cycle_representative(&q.scaled(3), p(3)).unwrap();
    assert!(r.is_zero());
    assert!(matches!(cycle_representative(&q, p(2)), Err(OneDimError::NotDivisible { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extraction_yields_cycles(seed in any::<u64>(), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let mut rng = gen::rng(seed);
        let s = gen::random_curve_system(&mut rng, q);
        let cut = extract_cycle_indices(&s, p(q)).unwrap();
        let pi = q as i64;
        let weight = |id: usize| if cut.gamma1.contains(&id) { 1 - pi } else { 1 };
        prop_assert!(weighted_boundary(&s, weight).is_empty());
        prop_assert!(cut.output_mass <= cut.mass_bound * (1.0 + 1e-12));
        prop_assert_eq!(cut.checks, cut.steps + 1);
    }

    #[test]
    fn decomposition_reconstructs(seed in any::<u64>()) {
        let c = graph(3, 3);
        let mut rng = gen::rng(seed);
        let t = gen::random_int_chain(&mut rng, &c, 1, 3, 0.5);
        let walks = decompose_paths_loops(&t).unwrap();
        prop_assert_eq!(edge_sum(&walks, &c), t.clone());
        let total: f64 = walks.iter().map(|w| w.mass).fold(0.0, |a, b| a + b);
        prop_assert!((total - t.mass()).abs() <= 1e-12 * (1.0 + t.mass()));
        let open = walks.iter().filter(|w| !w.closed).count() as f64;
        prop_assert_eq!(2.0 * open, t.boundary().unwrap().mass());
        for w in &walks {
            let inner = if w.closed { &w.vertices[..w.vertices.len() - 1] } else { &w.vertices[..] };
            let mut seen = inner.to_vec();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), inner.len());
        }
    }

    #[test]
    fn representatives_are_congruent_cycles(seed in any::<u64>(), q in prop::sample::select(vec![2u64, 3, 5])) {
        let axis: Vec<f64> = (0..=3).map(f64::from).collect();
        let c = Grid::new(vec![axis.clone(), axis]).complex(2).complex;
        let mut rng = gen::rng(seed);
        let t = gen::random_mod_p_boundary_chain(&mut rng, &c, q);
        let r = cycle_representative(&t, p(q)).unwrap();
        prop_assert!(r.boundary().unwrap().is_zero());
        prop_assert!(r.congruent(&t, p(q)));
        prop_assert!(r.mass() <= (q - 1) as f64 * t.mass_p(p(q)) * (1.0 + 1e-12));
    }
}
