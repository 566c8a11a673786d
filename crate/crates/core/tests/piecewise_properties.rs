use coconvex::funcexpr::parse_piecewise;
use coconvex::{Exec, Interval, PiecewiseFn, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SOURCES: [&str; 4] = [
    "[0, 3] : 0.5*x^4 - (x - 1)^3 - 2*x^2\n[-3, 0) : x",
    "[-3, 0] : abs(x^2 - 4) + x\n(0, 3] : abs(2*x - 4) - x",
    "[-2, -1] : 1 ; (-1, 0.5) : x ; [0.5, 0.5] : 7 ; (0.5, 5] : x^2",
    "[1, 4] : 1/(x + 1)",
];

#[test]
fn every_point_has_exactly_one_owner() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for src in SOURCES {
        let f = parse_piecewise(src).unwrap();
        let d = f.domain();
        let mut xs: Vec<f64> = (0..10_000).map(|_| rng.gen_range(d.lo()..=d.hi())).collect();
        xs.extend(f.pieces().iter().flat_map(|p| [p.lo, p.hi]));
        for x in xs {
            let owners = f.pieces().iter().filter(|p| p.owns(x)).count();
            assert_eq!(owners, 1, "{src}: x = {x}");
        }
    }
}

#[test]
fn pointwise_never_exceeds_sup() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let p = Polynomial::new(vec![0.3, -1.0, 0.5, 0.1]);
    for src in SOURCES {
        let f = parse_piecewise(src).unwrap();
        let d = f.domain();
        let sup = f.sup_deviation(&p, d, Exec::default()).unwrap();
        for _ in 0..1000 {
            let x = rng.gen_range(d.lo()..=d.hi());
            if let Ok(v) = f.pointwise_deviation(&p, x) {
                assert!(v <= sup.value + 1e-9, "{src}: {v} at {x} > {}", sup.value);
            }
        }
    }
}

#[test]
fn pullback_preserves_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for src in SOURCES {
        let f = parse_piecewise(src).unwrap();
        let d = f.domain();
        let g: PiecewiseFn = f.affine_pullback(d).unwrap();
        assert_eq!(g.domain(), Interval::UNIT);
        for _ in 0..1000 {
            let u = rng.gen_range(-1.0..=1.0);
            let x = d.midpoint() + 0.5 * d.width() * u;
            if let (Ok(a), Ok(b)) = (g.eval(u), f.eval(x)) {
                assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "{src}: u = {u}");
            }
        }
    }
}

#[test]
fn sequential_and_parallel_sup_agree() {
    let p = Polynomial::new(vec![0.0, -1.0, 0.5]);
    for src in SOURCES {
        let f = parse_piecewise(src).unwrap();
        let a = f.sup_deviation(&p, f.domain(), Exec::Sequential).unwrap();
        let b = f.sup_deviation(&p, f.domain(), Exec::default()).unwrap();
        assert_eq!(a, b, "{src}");
    }
}
