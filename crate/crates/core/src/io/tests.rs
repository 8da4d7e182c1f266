use proptest::prelude::*;

use super::*;
use crate::cubical::Grid;
use crate::gen;

fn roundtrip(f: &ChainFile) {
    let text = serialize(f).unwrap();
    let back = parse(&text).unwrap();
    assert_eq!(&back, f);
    assert_eq!(serialize(&back).unwrap(), text);
}

#[test]
fn unit_square_box() {
    let f = parse("format 1\ncarrier box\nambient 2\ndim 2\ncell 0 1 0 1 1\n").unwrap();
    let Payload::Box(b) = &f.payload else { panic!("box expected") };
    assert_eq!(b.len(), 1);
    assert_eq!(b.dim(), 2);
    assert_eq!(f.p, None);
    roundtrip(&f);
}

#[test]
fn parse_errors_are_anchored() {
    let err = parse("format 1\ncarrier box\nambient 1\ndim 1\ncell 0 1 1.5\n").unwrap_err();
    assert_eq!(
        err,
        IoError::Parse {
            line: 5,
            column: 10,
            message: "integer expected".into()
        }
    );
    let err = parse("format 1\ncarrier blob\n").unwrap_err();
    assert!(matches!(err, IoError::Parse { line: 2, column: 9, .. }), "{err}");
    let err = parse("format 2\n").unwrap_err();
    assert!(matches!(err, IoError::Parse { line: 1, column: 8, .. }));
    let err = parse("format 1\ncarrier box\nambient 2\ndim 1\ncell 0 1 0 1 1\n").unwrap_err();
    assert!(err.to_string().contains("dimension 2, header says 1"), "{err}");
    let err = parse("format 1\ncarrier box\nambient 2\ndim 1\ncell 0 1 0 1\n").unwrap_err();
    assert!(matches!(err, IoError::Parse { line: 5, column: 13, .. }), "{err}");
    let err = parse("format 1\ncarrier simplicial\nambient 2\ndim 1\nsimplex 0,0 ; 1,x ; 1\n").unwrap_err();
    assert!(matches!(err, IoError::Parse { line: 5, column: 15, .. }), "{err}");
    let err = parse("format 1\ncarrier curves\ncurve 2 a b 1\n").unwrap_err();
    assert!(matches!(err, IoError::Parse { line: 3, column: 7, .. }), "{err}");
    assert!(parse("").is_err());
}

#[test]
fn carriers_roundtrip() {
    let text = "# two parallel curves\nformat 1\ncarrier curves\np 2\ncurve 1 a b 1\ncurve 2 a b 1.5\n";
    let f = parse(text).unwrap();
    assert_eq!(f.p.map(Modulus::get), Some(2));
    roundtrip(&f);

    let f = parse("format 1\ncarrier simplicial\nambient 2\ndim 2\nsimplex 0,0 ; 1,0 ; 0,1 ; -3\n").unwrap();
    let Payload::Simplicial(t) = &f.payload else { panic!() };
    assert_eq!(t.mass(), 1.5);
    roundtrip(&f);

    let g = Grid::new(vec![vec![0.0, 0.5, 1.0]]).complex(1);
    let t = IntChain::from_coeffs(&g.complex, 1, [(0, 2), (1, -1)]).unwrap();
    let a = AbstractChain::from_chain(&t);
    let f = ChainFile::new(Payload::Abstract(a.clone()));
    roundtrip(&f);
    let (_, back) = a.build().unwrap();
    assert_eq!(back.iter().map(|(i, g)| (i, g.clone())).collect::<Vec<_>>(), t.iter().map(|(i, g)| (i, g.clone())).collect::<Vec<_>>());
}

#[test]
fn corrupt_abstract_complex() {
    let text = "format 1\ncarrier abstract\nambient 2\ndim 1\n\
        dimension 0\ncell a 1\ncell b 1\n\
        dimension 1\ncell e 1\ncell f 1\nface e b 1\nface e a -1\nface f b 1\nface f a -1\n\
        dimension 2\ncell s 1\nface s e 1\nface s f 1\n\
        coeff e 1\n";
    let f = parse(text).unwrap();
    let Payload::Abstract(a) = &f.payload else { panic!() };
    assert!(matches!(a.build(), Err(IoError::Complex(ComplexViolation::BoundaryOfBoundary { .. }))));
    roundtrip(&f);
}

#[test]
fn awkward_reals_roundtrip() {
    let vals = [0.1, 1.0 / 3.0, 1e-300, 123456789.125, -0.0, 2f64.sqrt()];
    for v in vals {
        assert_eq!(parse_real(&fmt_real(v)), Some(if v == 0.0 { 0.0 } else { v }));
    }
    assert_eq!(parse_real("inf"), None);
    assert_eq!(parse_real("NaN"), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_box_chains_roundtrip(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = gen::rng(seed);
        let k = (seed as usize) % (n + 1);
        let t = gen::random_box_chain(&mut rng, n, k, 100, 4, 3, 5);
        let f = ChainFile::new(Payload::Box(t));
        let text = serialize(&f).unwrap();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serialize(&back).unwrap(), text);
    }

    #[test]
    fn random_simplicial_chains_roundtrip(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let t = gen::random_simplicial_chain(&mut rng, 3, 2, 20, 8, 5);
        let f = ChainFile::new(Payload::Simplicial(t));
        let text = serialize(&f).unwrap();
        prop_assert_eq!(serialize(&parse(&text).unwrap()).unwrap(), text);
    }
}
