//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p coconvex-cli --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;

use coconvex::approx::best_shape_approx;
use coconvex::domainsep::{strictly_separates, strongly_separated, TChoice};
use coconvex::funcexpr::{parse_expr, parse_piecewise};
use coconvex::replication::{run_replication, ExampleId};
use coconvex::smoothness::{dt_modulus_standard, sym_diff, ModulusSpec, STANDARD_H_GRID, STANDARD_H_SPAN};
use coconvex::{Exec, Interval, PiecewiseFn, Polynomial, YPartition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn replication(id: ExampleId) -> Outcome {
    let rows = run_replication(id).map_err(|e| e.to_string())?;
    let failing: Vec<String> = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{}: computed {} vs {} (tol {})", r.label, r.computed, r.paper_value, r.tolerance))
        .collect();
    ensure(failing.is_empty(), || failing.join("; "))
}

fn criterion_1() -> Outcome {
    replication(ExampleId::Example1)
}

fn criterion_2() -> Outcome {
    replication(ExampleId::Example2)
}

fn criterion_3() -> Outcome {
    let out = common::run(&["check-dcp", "--config", "example1_dcp.conf"]);
    let report = common::stdout(&out);
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    ensure(common::field(&report, "overall") == Some("true"), || "overall is not true".into())?;
    let margin = common::number(&report, "margin");
    ensure((margin - 4.5).abs() <= 1e-9, || format!("margin {margin}"))
}

fn criterion_4() -> Outcome {
    let out = common::run(&["check-dccp", "--config", "example2_dccp.conf"]);
    let report = common::stdout(&out);
    ensure(common::field(&report, "overall_paper") == Some("true"), || "overall_paper is not true".into())?;
    ensure(common::field(&report, "match_with_declared") == Some("false"), || "match_with_declared is not false".into())?;
    let ys = common::field(&report, "recomputed_y").ok_or("no recomputed_y")?;
    let ys: Vec<f64> = ys.trim_matches(['[', ']']).split(", ").map(|s| s.parse().unwrap()).collect();
    let want = (5.0f64 / 6.0).sqrt();
    ensure(ys.len() == 2 && (ys[0] + want).abs() <= 1e-6 && (ys[1] - want).abs() <= 1e-6, || format!("recomputed {ys:?}"))
}

fn modulus_functions() -> Vec<PiecewiseFn> {
    let singles = [
        "x^2", "x^3 - x", "abs(x)", "abs(x - 0.3)", "x*abs(x)", "1/(x + 2)", "abs(x^2 - 0.25)", "(x + 1)^5/10",
        "abs(x)^3", "x^4 - x^2", "1/(x^2 + 0.1)", "abs(2*x - 1) + x",
    ];
    let pieces = [
        "[-1, 0) : x ; [0, 1] : x^2",
        "[-1, 0.5] : 0 ; (0.5, 1] : 1",
        "[-1, -0.2) : -x ; [-0.2, 1] : x^2 + 0.16",
        "[-1, 0] : abs(x + 0.5) ; (0, 1] : 0.5 - x",
        "[-1, 1] : x^6",
        "[-1, 0) : x^3 ; [0, 1] : -x^3",
        "[-1, 0.1) : 1/(x - 2) ; [0.1, 1] : x",
        "[-1, 1] : abs(abs(x) - 0.5)",
    ];
    singles
        .iter()
        .map(|s| PiecewiseFn::single(parse_expr(s).unwrap(), Interval::UNIT))
        .chain(pieces.iter().map(|s| parse_piecewise(s).unwrap()))
        .collect()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let wide = iv(-10.0, 10.0);
    for _ in 0..250 {
        let k: u32 = rng.gen_range(1..=6);
        let coeffs: Vec<f64> = (0..k).take(rng.gen_range(1..=k as usize)).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let p = Polynomial::new(coeffs.clone());
        let (x, h) = (rng.gen_range(-3.0..3.0), rng.gen_range(1e-3..1.0));
        let d = sym_diff(&PiecewiseFn::from_polynomial(&p, wide), x, h, k).map_err(|e| e.to_string())?;
        let reach = (x.abs() + f64::from(k) * h).max(1.0);
        let scale: f64 = coeffs.iter().enumerate().map(|(i, c)| c.abs() * reach.powi(i as i32)).sum::<f64>() * 2f64.powi(k as i32);
        ensure(d.abs() <= 1e-9 * scale, || format!("annihilation: k = {k}, p = {p}, diff = {d}"))?;
    }

    // Nested t values, so each step grid contains the previous one.
    let last = (STANDARD_H_GRID - 1) as f64;
    let ts: Vec<f64> = (0..8).map(|i| 0.9 * STANDARD_H_SPAN.powf(f64::from(4 * (7 - i)) / last)).collect();
    let fs = modulus_functions();
    for f in &fs {
        let values = ts
            .iter()
            .map(|&t| dt_modulus_standard(f, &ModulusSpec::standard(2, 2, t).unwrap(), Exec::default()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        ensure(values.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12) + 1e-12), || format!("monotonicity: {f}: {values:?}"))?;
    }

    let spec = ModulusSpec::standard(2, 2, 0.5).unwrap();
    for f in &fs {
        let base = dt_modulus_standard(f, &spec, Exec::default()).map_err(|e| e.to_string())?;
        for c in [3.7, -0.25] {
            let scaled = dt_modulus_standard(&f.scaled(c), &spec, Exec::default()).map_err(|e| e.to_string())?;
            let want = c.abs() * base;
            ensure((scaled - want).abs() <= 1e-12 * want.max(f64::MIN_POSITIVE), || format!("homogeneity: {f}, c = {c}"))?;
        }
    }
    Ok(())
}

/// Best error over a Lobatto grid for `a0 + a1 x + a2 x²` with `a2 ≥ 0`
/// (the constant term is the midrange), by coarse then fine search.
fn brute_force(f: &PiecewiseFn, n: usize, grid: usize) -> f64 {
    let xs: Vec<f64> = (0..grid).map(|j| -(PI * j as f64 / (grid - 1) as f64).cos()).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f.eval(x).unwrap()).collect();
    let err = |a1: f64, a2: f64| {
        let (lo, hi) = xs.iter().zip(&fs).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (&x, &v)| {
            let r = v - a1 * x - a2 * x * x;
            (lo.min(r), hi.max(r))
        });
        0.5 * (hi - lo)
    };
    let (r1, r2) = (if n >= 2 { 300 } else { 0 }, if n >= 3 { 300 } else { 0 });
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in -r1..=r1 {
        for j in 0..=r2 {
            let (a1, a2) = (f64::from(i) * 1e-2, f64::from(j) * 1e-2);
            let e = err(a1, a2);
            if e < best.0 {
                best = (e, a1, a2);
            }
        }
    }
    let (_, c1, c2) = best;
    let (s1, s2) = (if n >= 2 { 100 } else { 0 }, if n >= 3 { 100 } else { 0 });
    for i in -s1..=s1 {
        for j in -s2..=s2 {
            let (a1, a2) = (c1 + f64::from(i) * 1e-4, (c2 + f64::from(j) * 1e-4).max(0.0));
            best.0 = best.0.min(err(a1, a2));
        }
    }
    best.0
}

fn criterion_6() -> Outcome {
    let unit = |s: &str| PiecewiseFn::single(parse_expr(s).unwrap(), Interval::UNIT);
    let empty = YPartition::empty(Interval::UNIT);
    let e2 = best_shape_approx(&unit("x^2"), 2, &empty, 257).map_err(|e| e.to_string())?.epsilon;
    ensure((e2 - 0.5).abs() <= 2e-3, || format!("E_2(x^2) = {e2}"))?;

    let instances = [
        ("x^2", 2),
        ("abs(x)", 2),
        ("abs(x)", 3),
        ("x^3", 2),
        ("x^3", 3),
        ("abs(x - 0.3)", 3),
        ("1/(x + 2)", 3),
        ("x^4 - x^2", 3),
        ("abs(x^2 - 0.25)", 1),
        ("x*abs(x) + 0.5*x", 3),
    ];
    for (src, n) in instances {
        let f = unit(src);
        let lp = best_shape_approx(&f, n, &empty, 33).map_err(|e| e.to_string())?.epsilon;
        let brute = brute_force(&f, n, 33);
        ensure(lp <= brute + 1e-9 && brute - lp <= 2e-3, || format!("{src}, n = {n}: lp {lp}, search {brute}"))?;
        let eps = (1..=7)
            .map(|m| best_shape_approx(&f, m, &empty, 129).map(|r| r.epsilon))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        ensure(eps.windows(2).all(|w| w[1] <= w[0] + 1e-9), || format!("{src}: epsilon not monotone {eps:?}"))?;
    }
    Ok(())
}

fn sign_scan(p: &Polynomial, d: Interval) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for x in d.linspace(100_001) {
        let v = p.eval(x);
        if v == 0.0 {
            continue;
        }
        if let Some((px, pv)) = prev {
            if (pv < 0.0) != (v < 0.0) {
                let (mut a, mut b) = (px, x);
                for _ in 0..80 {
                    let m = 0.5 * (a + b);
                    if (p.eval(m) < 0.0) == (pv < 0.0) {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                out.push(0.5 * (a + b));
            }
        }
        prev = Some((x, v));
    }
    out
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = iv(-3.0, 3.0);
    let random_poly = |rng: &mut ChaCha8Rng| {
        let deg = rng.gen_range(0..=6);
        Polynomial::new((0..=deg).map(|_| rng.gen_range(-1.0..1.0)).collect())
    };
    for _ in 0..100 {
        let p = random_poly(&mut rng);
        let got = p.inflection_points(d);
        let want = sign_scan(&p.derivative(2), d);
        ensure(got.len() == want.len() && got.iter().zip(&want).all(|(g, w)| (g - w).abs() <= 1e-8), || {
            format!("inflection points of {p}: {got:?} vs scan {want:?}")
        })?;
    }
    for _ in 0..50 {
        let p = random_poly(&mut rng);
        let lo = rng.gen_range(-2.0..1.0);
        let target = iv(lo, lo + rng.gen_range(0.0..2.0));
        let parts = p.preimage_interval(target, d);
        for _ in 0..200 {
            let x = rng.gen_range(d.lo()..=d.hi());
            let v = p.eval(x);
            if (v - target.lo()).abs() < 1e-7 || (v - target.hi()).abs() < 1e-7 {
                continue;
            }
            let member = parts.iter().any(|part| part.contains(x));
            ensure(member == target.contains(v), || format!("preimage of {target} under {p} at x = {x}"))?;
            if member {
                ensure(v >= target.lo() - 1e-9 && v <= target.hi() + 1e-9, || format!("{p}({x}) = {v}"))?;
            }
        }
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let p3 = Polynomial::new(vec![0.0, -1.0, 0.5]);
    let d = iv(-3.0, 3.0);
    let v = strictly_separates(&p3, d, 6.0).map_err(|e| e.to_string())?;
    let b = v.b.ok_or("no separating level")?;
    ensure(b == 9.75 && v.sup_rhs < b && b < p3.eval(6.0), || format!("strict separation: {v:?}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let hbar = PiecewiseFn::single(parse_expr("1 + x^2").unwrap(), iv(0.0, 1.0));
    for _ in 0..200 {
        let poly = |rng: &mut ChaCha8Rng| Polynomial::new((0..4).map(|_| rng.gen_range(-2.0..2.0)).collect());
        let (p, q) = (poly(&mut rng), poly(&mut rng));
        let a = rng.gen_range(-3.0..3.0);
        let (d1, d2) = (iv(a, a + 1.0), iv(-a - 1.0, -a));
        let base = strongly_separated(&p, d1, &q, d2, None).map_err(|e| e.to_string())?;
        if base.margin().abs() < 1e-9 {
            continue;
        }
        let c = rng.gen_range(0.01..100.0);
        let scaled = strongly_separated(&p.scale(c), d1, &q.scale(c), d2, None).map_err(|e| e.to_string())?;
        let weighted = strongly_separated(&p, d1, &q, d2, Some((&hbar, TChoice::AllT))).map_err(|e| e.to_string())?;
        ensure(scaled.holds == base.holds && weighted.holds == base.holds, || format!("scaling changed the verdict for {p} vs {q}"))?;
    }

    let identity = PiecewiseFn::single(parse_expr("x").unwrap(), iv(0.0, 1.0));
    let (p, q) = (parse_expr("x^2 + 1").unwrap().to_polynomial().unwrap(), Polynomial::x());
    let (d1, d2) = (iv(-1.0, 1.0), iv(-1.0, 0.0));
    let all = strongly_separated(&p, d1, &q, d2, Some((&identity, TChoice::AllT))).map_err(|e| e.to_string())?;
    ensure(!all.holds && all.t == Some(0.0), || format!("AllT verdict {all:?}"))?;
    for j in 1..101 {
        let t = f64::from(j) / 100.0;
        let fixed = strongly_separated(&p, d1, &q, d2, Some((&identity, TChoice::Fixed(t)))).map_err(|e| e.to_string())?;
        ensure(fixed.holds, || format!("fails at t = {t}"))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let pass = || -> Vec<Vec<u8>> {
        common::MATRIX
            .iter()
            .flat_map(|(_, args, _)| {
                let fixed: Vec<&str> = ["--float-format", "fixed17"].iter().chain(args.iter()).copied().collect();
                [common::run(args).stdout, common::run(&fixed).stdout]
            })
            .collect()
    };
    let (first, second) = (pass(), pass());
    ensure(first.iter().all(|r| !r.is_empty()), || "an invocation produced no report".into())?;
    let differing: Vec<&str> = common::MATRIX
        .iter()
        .zip(first.chunks(2).zip(second.chunks(2)))
        .filter(|(_, (a, b))| a != b)
        .map(|((name, _, _), _)| *name)
        .collect();
    ensure(differing.is_empty(), || format!("reports differ: {differing:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Example 1 replication", criterion_1),
        ("Example 2 replication", criterion_2),
        ("DCP verification", criterion_3),
        ("DCCP dual-mode verification", criterion_4),
        ("modulus properties", criterion_5),
        ("approximation oracle", criterion_6),
        ("geometry oracles", criterion_7),
        ("separation contracts", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {}: {name}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
