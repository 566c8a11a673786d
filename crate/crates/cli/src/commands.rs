use coconvex::approx::{
    best_shape_approx, best_shape_approx_refined, check_jackson_bound, DeviationKind, JacksonCheck, ModulusChoice,
};
use coconvex::domainsep::{
    check_dccp, check_dcp, strictly_separates, strongly_separated, supporting_hyperplane, InflectionRow,
    SeparationVerdict, TChoice,
};
use coconvex::funcexpr::parse_expr;
use coconvex::replication::{run_replication, ExampleId};
use coconvex::shape::{default_lambdas, in_delta2, poly_in_delta2, secant_convexity_test, ShapeVerdict, DEFAULT_PAIRS};
use coconvex::smoothness::{dt_modulus_replication, dt_modulus_standard, ModulusMode};
use coconvex::{Exec, Interval, PiecewiseFn, Polynomial};

use crate::args::*;
use crate::error::CliError;
use crate::inputs::{parse_polynomial, Inputs};
use crate::report::{Report, Verdict};

pub type Outcome = Result<(Report, Verdict), CliError>;

const DEFAULT_GRID: usize = 257;
const REFINE_MAX_GRID: usize = 4097;
const SHAPE_TOL: f64 = 1e-9;

pub fn run(cli: &Cli) -> Outcome {
    let fmt = cli.float_format;
    match &cli.command {
        Command::Eval(a) => eval(a, Report::new("eval", fmt)),
        Command::Roots(a) => roots(a, Report::new("roots", fmt)),
        Command::Inflect(a) => inflect(a, Report::new("inflect", fmt)),
        Command::Preimage(a) => preimage(a, Report::new("preimage", fmt)),
        Command::Modulus(a) => modulus(a, Report::new("modulus", fmt)),
        Command::Convexity(a) => convexity(a, Report::new("convexity", fmt)),
        Command::Delta2(a) => delta2(a, Report::new("delta2", fmt)),
        Command::Approx(a) => approx(a, Report::new("approx", fmt)),
        Command::Jackson(a) => jackson(a, Report::new("jackson", fmt)),
        Command::CheckDcp(a) => dcp(a, Report::new("check-dcp", fmt)),
        Command::CheckDccp(a) => dccp(a, Report::new("check-dccp", fmt)),
        Command::Separate(a) => separate(a, Report::new("separate", fmt)),
        Command::Replicate(a) => replicate(a, Report::new("replicate", fmt)),
    }
}

fn echo_function(r: &mut Report, key: &str, f: &PiecewiseFn) {
    r.begin(key);
    r.interval("domain", f.domain());
    for (i, piece) in f.pieces().iter().enumerate() {
        r.text(&format!("piece_{}", i + 1), piece.to_string());
    }
    r.end();
}

fn eval(a: &EvalArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let x = inp.required(a.x, "x")?;
    let value = match inp.poly()? {
        Some(p) => {
            r.text("poly", p.to_string());
            p.eval(x)
        }
        None => {
            let f = inp.require_function()?;
            echo_function(&mut r, "fn", &f);
            f.eval(x)?
        }
    };
    r.num("x", x);
    r.num("value", value);
    Ok((r, Verdict::Ok))
}

fn roots(a: &InputArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(a)?;
    let p = inp.require_poly()?;
    let d = inp.require_domain()?;
    let roots = p.real_roots(d)?;
    r.text("poly", p.to_string());
    r.interval("domain", d);
    r.int("count", roots.len());
    r.nums("roots", &roots);
    Ok((r, Verdict::Ok))
}

fn inflect(a: &InputArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(a)?;
    let p = inp.require_poly()?;
    let d = inp.require_domain()?;
    let pts = p.inflection_points(d);
    r.text("poly", p.to_string());
    r.interval("domain", d);
    r.int("count", pts.len());
    r.nums("inflection_points", &pts);
    let values: Vec<f64> = pts.iter().map(|&y| p.eval(y)).collect();
    r.nums("values", &values);
    Ok((r, Verdict::Ok))
}

fn preimage(a: &PreimageArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let p = inp.require_poly()?;
    let d = inp.require_domain()?;
    let target = inp
        .interval(a.target.as_deref(), "target")?
        .ok_or_else(|| CliError::missing("target"))?;
    let parts = p.preimage_interval(target, d);
    r.text("poly", p.to_string());
    r.interval("domain", d);
    r.interval("target", target);
    r.int("count", parts.len());
    r.begin("intervals");
    for (i, iv) in parts.iter().enumerate() {
        r.interval(&format!("interval_{}", i + 1), *iv);
    }
    r.end();
    Ok((r, Verdict::Ok))
}

fn modulus(a: &ModulusArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let g = inp.require_function()?;
    let d = inp.domain_or(&g)?;
    let spec = inp.modulus_spec(&a.modulus, d)?;
    echo_function(&mut r, "fn", &g);
    r.int("k", spec.k() as usize);
    r.int("r", spec.r() as usize);
    r.num("t", spec.t());
    match spec.mode() {
        ModulusMode::Standard => {
            r.text("mode", "standard");
            r.num("omega", dt_modulus_standard(&g, &spec, Exec::default())?);
        }
        ModulusMode::Replication { h } => {
            let m = dt_modulus_replication(&g, &spec)?;
            r.text("mode", "replication");
            r.interval("interval", spec.interval());
            r.num("h", h);
            r.num("delta", m.delta);
            r.num("delta_at", m.argmax);
            r.num("weight", m.weight);
            r.num("omega", m.value);
        }
    }
    Ok((r, Verdict::Ok))
}

fn shape_verdict(r: &mut Report, v: &ShapeVerdict) -> Verdict {
    r.flag("holds", v.holds);
    r.int("tested", v.tested);
    r.int("skipped", v.skipped);
    if let Some(s) = &v.counterexample {
        r.begin("counterexample");
        r.num("x", s.x);
        r.num("y", s.y);
        r.num("lambda", s.lambda);
        r.num("lhs", s.lhs);
        r.num("rhs", s.rhs);
        r.end();
    }
    Verdict::from_holds(v.holds)
}

fn convexity(a: &ConvexityArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let f = inp.require_function()?;
    let d = inp.domain_or(&f)?;
    let pairs = inp.number(a.pairs, "pairs")?.unwrap_or(DEFAULT_PAIRS);
    let v = secant_convexity_test(&f, d, pairs, &default_lambdas())?;
    echo_function(&mut r, "fn", &f);
    r.interval("domain", d);
    r.int("pairs", pairs);
    let verdict = shape_verdict(&mut r, &v);
    Ok((r, verdict))
}

fn delta2(a: &Delta2Args, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    if let Some(p) = inp.poly()? {
        let d = inp.require_domain()?;
        let y = inp.partition(a.y.as_deref(), d)?;
        let v = poly_in_delta2(&p, &y, SHAPE_TOL);
        r.text("poly", p.to_string());
        r.interval("domain", d);
        r.nums("y", y.points());
        r.flag("holds", v.holds);
        if let Some((i, x, val)) = v.worst {
            r.begin("worst");
            r.int("subinterval", i + 1);
            r.num("x", x);
            r.num("second_derivative", val);
            r.end();
        }
        return Ok((r, Verdict::from_holds(v.holds)));
    }
    let f = inp.require_function()?;
    let d = inp.domain_or(&f)?;
    let y = inp.partition(a.y.as_deref(), d)?;
    let pairs = inp.number(a.pairs, "pairs")?.unwrap_or(DEFAULT_PAIRS);
    let v = in_delta2(&f, &y, pairs)?;
    echo_function(&mut r, "fn", &f);
    r.interval("domain", d);
    r.nums("y", y.points());
    let verdict = shape_verdict(&mut r, &v);
    Ok((r, verdict))
}

fn approx(a: &ApproxArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let f = inp.require_function()?;
    let d = inp.domain_or(&f)?;
    let n: usize = inp.required(a.n, "n")?;
    let y = inp.partition(a.y.as_deref(), d)?;
    let grid = inp.number(a.grid, "grid")?.unwrap_or(DEFAULT_GRID.max(4 * n));
    let res = if a.refine {
        best_shape_approx_refined(&f, n, &y, grid, REFINE_MAX_GRID.max(grid))?
    } else {
        best_shape_approx(&f, n, &y, grid)?
    };
    echo_function(&mut r, "fn", &f);
    r.interval("domain", d);
    r.int("n", n);
    r.nums("y", y.points());
    r.int("grid_size", res.grid_size);
    r.text("poly", res.poly.to_string());
    r.nums("coefficients", res.poly.coeffs());
    r.num("epsilon", res.epsilon);
    r.num("lp_epsilon", res.lp_epsilon);
    r.num("max_shape_violation", res.max_shape_violation);
    r.nums("active_points", &res.active_points);
    Ok((r, Verdict::Ok))
}

fn jackson_section(r: &mut Report, chk: &JacksonCheck, modulus: &ModulusChoice, deviation: DeviationKind, claimed: Option<f64>) {
    r.int("n", chk.report.n);
    match deviation {
        DeviationKind::Pointwise(x0) => r.text("deviation_kind", format!("pointwise at {}", r.float(x0))),
        DeviationKind::Sup(iv) => r.text("deviation_kind", format!("sup over [{}, {}]", r.float(iv.lo()), r.float(iv.hi()))),
    }
    r.num("deviation", chk.report.deviation);
    r.num("deviation_at", chk.deviation_at);
    match modulus {
        ModulusChoice::Computed(spec) => match spec.mode() {
            ModulusMode::Standard => r.text("modulus", "standard"),
            ModulusMode::Replication { h } => r.text("modulus", format!("replication h = {}", r.float(h))),
        },
        ModulusChoice::QuotedDelta { .. } => r.text("modulus", "quoted difference"),
    }
    r.opt_num("delta", chk.delta);
    r.opt_num("delta_at", chk.delta_at);
    r.num("omega", chk.report.omega);
    r.num("c", chk.report.c);
    r.flag("degenerate", chk.report.degenerate);
    r.opt_num("claimed_c", claimed);
    let c = claimed.unwrap_or(chk.report.c);
    r.flag("bound_holds", chk.report.bound_holds_for(c));
}

fn jackson(a: &JacksonArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let f = inp.require_function()?;
    let f2 = inp.second_derivative(&a.jackson, &f)?;
    let p = inp.require_poly()?;
    let d = inp.domain_or(&f)?;
    let cfg = inp.jackson(&a.jackson, &p, d, None)?;
    let chk = check_jackson_bound(&f, &f2, &p, cfg.n, &cfg.modulus, cfg.deviation)?;
    r.text("poly", p.to_string());
    r.interval("domain", d);
    jackson_section(&mut r, &chk, &cfg.modulus, cfg.deviation, cfg.claimed_c);
    let verdict = match cfg.claimed_c {
        Some(c) => Verdict::from_holds(chk.report.bound_holds_for(c)),
        None => Verdict::Ok,
    };
    Ok((r, verdict))
}

fn dcp(a: &DcpArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let p = inp.require_poly()?;
    let d = inp.require_domain()?;
    let f = inp.require_function()?;
    let f2 = inp.second_derivative(&a.jackson, &f)?;
    let cfg = inp.jackson(&a.jackson, &p, d, Some(2))?;
    let witness = inp.number(a.witness, "witness")?;
    let rep = check_dcp(&p, d, witness, &f, &f2, &cfg)?;
    r.text("poly", p.to_string());
    r.interval("domain", d);
    r.flag("prop1_compact", rep.prop1_compact);
    r.num("sup_on_domain", rep.sup_on_domain);
    r.begin("prop2_witness");
    match rep.prop2_witness {
        Some(w) => {
            r.num("t", w.t);
            r.num("value", w.value);
            r.num("margin", w.margin);
            r.flag("searched", w.searched);
        }
        None => r.text("found", "none"),
    }
    r.end();
    r.begin("prop3");
    jackson_section(&mut r, &rep.prop3, &cfg.modulus, cfg.deviation, cfg.claimed_c);
    r.end();
    r.flag("overall", rep.overall);
    Ok((r, Verdict::from_holds(rep.overall)))
}

fn inflection_rows(r: &mut Report, key: &str, rows: &[InflectionRow]) {
    r.begin(key);
    for (i, row) in rows.iter().enumerate() {
        r.begin(&format!("point_{}", i + 1));
        r.num("y", row.y);
        r.num("abs_value", row.abs_value);
        r.flag("within_half", row.within_bound);
        r.end();
    }
    r.end();
}

fn dccp(a: &DccpArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let p = inp.require_poly()?;
    let d = inp.require_domain()?;
    let f = inp.require_function()?;
    let f2 = inp.second_derivative(&a.jackson, &f)?;
    let y = inp.partition(a.y.as_deref(), d)?;
    let cfg = inp.jackson(&a.jackson, &p, d, None)?;
    let rep = check_dccp(&p, d, &y, &f, &f2, &cfg)?;
    r.text("poly", p.to_string());
    r.interval("domain", d);
    r.nums("declared_y", y.points());
    r.flag("prop1_changes_convexity", rep.prop1_changes_convexity);
    inflection_rows(&mut r, "prop2_paper_mode", &rep.prop2_paper_mode);
    r.begin("prop2_verified_mode");
    let recomputed: Vec<f64> = rep.prop2_verified_mode.iter().map(|row| row.y).collect();
    r.nums("recomputed_y", &recomputed);
    inflection_rows(&mut r, "points", &rep.prop2_verified_mode);
    r.flag("match_with_declared", rep.match_with_declared);
    r.end();
    r.begin("prop3");
    jackson_section(&mut r, &rep.prop3, &cfg.modulus, cfg.deviation, cfg.claimed_c);
    r.end();
    r.flag("overall_paper", rep.overall_paper);
    r.flag("overall_verified", rep.overall_verified);
    Ok((r, Verdict::from_holds(rep.overall_paper)))
}

fn separation_fields(r: &mut Report, v: &SeparationVerdict) {
    r.flag("holds", v.holds);
    r.opt_num("b", v.b);
    r.num("inf_lhs", v.inf_lhs);
    r.num("sup_rhs", v.sup_rhs);
    r.num("margin", v.margin());
    if let Some(t) = v.t {
        r.num("t", t);
    }
}

fn separate(a: &SeparateArgs, mut r: Report) -> Outcome {
    let inp = Inputs::new(&a.input)?;
    let p = inp.require_poly()?;
    let d = inp.require_domain()?;
    r.text("poly", p.to_string());
    r.interval("domain", d);
    let v = if a.strict {
        let x = inp.required(a.x, "x")?;
        r.text("predicate", "strict");
        r.num("x", x);
        strictly_separates(&p, d, x)?
    } else if a.support {
        let x = inp.required(a.x, "x")?;
        let alpha = inp.required(a.alpha, "alpha")?;
        r.text("predicate", "supporting");
        r.num("x_hat", x);
        r.num("alpha", alpha);
        supporting_hyperplane(&p, d, x, alpha)?
    } else {
        let q = inp
            .raw(a.q.as_deref(), "q")
            .ok_or_else(|| CliError::missing("q"))
            .and_then(|s| parse_polynomial(&s, "q"))?;
        let d2 = inp.interval(a.domain2.as_deref(), "domain2")?.unwrap_or(d);
        r.text("predicate", "strong");
        r.text("q", q.to_string());
        r.interval("domain2", d2);
        strong(&inp, a, &p, d, &q, d2, &mut r)?
    };
    separation_fields(&mut r, &v);
    Ok((r, Verdict::from_holds(v.holds)))
}

fn strong(
    inp: &Inputs,
    a: &SeparateArgs,
    p: &Polynomial,
    d1: Interval,
    q: &Polynomial,
    d2: Interval,
    r: &mut Report,
) -> Result<SeparationVerdict, CliError> {
    let Some(text) = inp.raw(a.hbar.as_deref(), "hbar") else {
        return Ok(strongly_separated(p, d1, q, d2, None)?);
    };
    let expr = parse_expr(&text).map_err(|source| CliError::Parse {
        what: "hbar".into(),
        source,
    })?;
    let hbar = PiecewiseFn::single(expr, Interval::new(0.0, 1.0).expect("unit interval"));
    let choice = match inp.raw(a.t.as_deref(), "hbar_t").as_deref() {
        None => return Err(CliError::Usage("--hbar needs --t <value|all>".into())),
        Some("all") => TChoice::AllT,
        Some(s) => TChoice::Fixed(
            s.parse()
                .map_err(|_| CliError::Usage(format!("`t`: expected a number or \"all\", got {s:?}")))?,
        ),
    };
    r.text("hbar", text);
    match choice {
        TChoice::AllT => r.text("t_choice", "all"),
        TChoice::Fixed(t) => r.num("t_choice", t),
    }
    Ok(strongly_separated(p, d1, q, d2, Some((&hbar, choice)))?)
}

fn replicate(a: &ReplicateArgs, mut r: Report) -> Outcome {
    let id: ExampleId = a.example.parse()?;
    let rows = run_replication(id)?;
    r.text("example", id.to_string());
    r.int("rows", rows.len());
    let mut passed = 0;
    for (i, row) in rows.iter().enumerate() {
        r.begin(&format!("row_{}", i + 1));
        r.text("label", &row.label);
        r.num("computed", row.computed);
        r.num("paper_value", row.paper_value);
        r.num("tolerance", row.tolerance);
        r.flag("pass", row.pass);
        r.text("provenance_note", &row.provenance_note);
        r.end();
        passed += usize::from(row.pass);
    }
    r.int("passed", passed);
    r.int("failed", rows.len() - passed);
    Ok((r, Verdict::from_holds(passed == rows.len())))
}
