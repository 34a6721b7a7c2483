use std::fs;
use std::io::Write;

use rellich::constants::{mode_constant, parabola};
use rellich::radial::{halfspace_hardy_quadrature, hardy_lhs_rhs_radial, sample_profiles, Factor};
use rellich::sphere::HarmonicIndex;
use rellich::suites::{run_suite, Check, SUITES};
use rellich::verifier::{
    cz_quotient_radial, halfspace_rellich_quotient, rellich_quotient, rellich_scan, QuotientReport, Verdict,
    VERDICT_TOL,
};
use rellich::witness::{
    cz2_counterexample, halfspace_hardy_witness, hardy_witness, nearest_parameter, rellich_witness, CutoffFamily,
};
use rellich::{
    best_constant, cz_validity, rellich_validity, spectrum_distance, ConstantEstimate, Domain, Error, EstimateKind,
    Exponent, ModeSet, ProblemParams, QuadratureSpec, RadialProfile, SpectrumSet, Validity,
};
use serde_json::{json, Value};

use crate::args::{Cli, Command, Format, Operator, ProblemArgs, ProfileSpec, RunArgs, WitnessCommand};

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Convergence(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_convergence_failure() {
            Failure::Convergence(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

/// Rendered output and whether any expectation was violated.
pub struct Output {
    pub text: String,
    pub violation: bool,
}

impl RunArgs {
    fn spec(&self) -> Result<QuadratureSpec, Failure> {
        if !(1e-14..=1e-4).contains(&self.tol) {
            return Err(Failure::Usage(format!("--tol {} outside [1e-14, 1e-4]", self.tol)));
        }
        Ok(QuadratureSpec::with_tol(self.tol))
    }

    fn cutoff(&self) -> Result<CutoffFamily, Failure> {
        let c = match self.log_k {
            Some(l) => CutoffFamily::from_log(l, self.shape.into()),
            None => CutoffFamily::new(self.k, self.shape.into()),
        };
        Ok(c?)
    }
}

pub fn run(cli: &Cli) -> Result<Output, Failure> {
    let run = &cli.run;
    let spec = run.spec()?;
    if matches!(cli.cmd, Command::Table { .. }) {
        return table(cli);
    }
    if let Command::Verify { suite } = &cli.cmd {
        return verify(suite, run);
    }
    if run.format == Format::Csv {
        return Err(Failure::Usage("csv output is available for table and verify only".into()));
    }
    let (mut report, violation) = match &cli.cmd {
        Command::Validity { problem, operator, n_max } => (validity(problem, *operator, *n_max)?, false),
        Command::Constant { problem, n } => (constant(problem, *n)?, false),
        Command::Quotient { problem, n, profile } => {
            let params = problem.params();
            let f = build_profile(&params, *n, profile, run)?;
            let r = quotient_for(&params, *n, &f, &spec)?;
            let violation = r.verdict == Verdict::ViolatesBound;
            let mut v = to_value(&r);
            v["profile"] = json!(describe_profile(profile));
            (with_command("quotient", v), violation)
        }
        Command::Scan { problem, n } => {
            let r = rellich_scan(&problem.params(), *n, &run.cutoff()?, &spec)?;
            let violation = r.verdict == Verdict::ViolatesBound;
            let mut v = with_command("scan", to_value(&r));
            v["shape"] = to_value(&run.cutoff()?.shape);
            v["verdict_tol"] = json!(VERDICT_TOL);
            (v, violation)
        }
        Command::Witness { family } => witness(family, run, &spec)?,
        Command::Spectrum { problem, lambda, n_max } => {
            let params = problem.params();
            params.validate()?;
            let orders: Vec<u32> = match &params.modes {
                ModeSet::Finite(v) => v.clone(),
                ModeSet::All if params.domain == Domain::HalfSpace => (1..=*n_max).step_by(2).collect(),
                ModeSet::All => (0..=*n_max).collect(),
            };
            let set = SpectrumSet::new(parabola(&params), params.dim, orders);
            let (distance, argmin_n) = spectrum_distance(*lambda, &set);
            let v = json!({
                "params": params,
                "lambda": [lambda.re, lambda.im],
                "distance": distance,
                "argmin_n": argmin_n,
                "orders_checked": set.shifts.len(),
            });
            (with_command("spectrum", v), false)
        }
        Command::Table { .. } | Command::Verify { .. } => unreachable!("dispatched above"),
    };
    report["tol"] = json!(run.tol);
    Ok(Output { text: render(&report, run.format), violation })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialise")
}

fn with_command(command: &str, mut v: Value) -> Value {
    v["schema"] = json!(SCHEMA);
    v["command"] = json!(command);
    v
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json | Format::Csv => {
            let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            if let Value::Object(map) = v {
                for (k, x) in map {
                    match x {
                        Value::String(t) => s.push_str(&format!("{k}: {t}\n")),
                        other => s.push_str(&format!("{k}: {other}\n")),
                    }
                }
            }
            s
        }
    }
}

fn validity_value(v: &Validity) -> Value {
    let modes: Vec<Value> = v.violating_modes.iter().map(|(n, r)| json!({ "n": n, "reason": r })).collect();
    json!({
        "holds": v.holds,
        "violating_modes": modes,
        "checked_mode_bound": v.checked_mode_bound,
    })
}

fn validity(problem: &ProblemArgs, operator: Operator, n_max: Option<u32>) -> Result<Value, Failure> {
    let params = problem.params();
    let (v, constant) = match operator {
        Operator::Rellich => {
            let v = rellich_validity(&params, n_max)?;
            let c = if v.holds { best_constant(&params).ok() } else { None };
            (v, c)
        }
        Operator::Cz => {
            let p = problem.p.finite().ok_or_else(|| Failure::Usage("the Calderon-Zygmund check needs finite p".into()))?;
            (cz_validity(problem.dim, p, problem.alpha)?, None)
        }
    };
    let mut out = validity_value(&v);
    out["params"] = to_value(&params);
    out["operator"] = json!(match operator {
        Operator::Rellich => "rellich",
        Operator::Cz => "cz",
    });
    out["constant"] = to_value(&constant);
    Ok(with_command("validity", out))
}

fn constant(problem: &ProblemArgs, n: Option<u32>) -> Result<Value, Failure> {
    let params = problem.params();
    let est = match n {
        Some(n) => mode_constant(&params, n),
        None => best_constant(&params),
    };
    let mut out = match est {
        Ok(e) => json!({ "holds": true, "violating_modes": [], "estimate": e }),
        Err(Error::InvalidInequality { modes }) => json!({ "holds": false, "violating_modes": modes, "estimate": null }),
        Err(e) => return Err(e.into()),
    };
    out["params"] = to_value(&params);
    out["n"] = json!(n);
    Ok(with_command("constant", out))
}

fn kind_name(k: EstimateKind) -> &'static str {
    match k {
        EstimateKind::Exact => "exact",
        EstimateKind::Interval => "interval",
        EstimateKind::UpperOnly => "upper_only",
    }
}

fn table_row(params: &ProblemParams) -> Result<[String; 8], Failure> {
    let v = rellich_validity(params, None)?;
    let (kind, lower, upper, source) = match best_constant(params) {
        Ok(ConstantEstimate { kind, lower, upper, source, .. }) => {
            let source = to_value(&source).as_str().unwrap_or_default().to_string();
            (kind_name(kind).to_string(), lower.to_string(), upper.to_string(), source)
        }
        Err(Error::InvalidInequality { .. }) => ("none".into(), String::new(), String::new(), String::new()),
        Err(e) => return Err(e.into()),
    };
    Ok([
        params.dim.to_string(),
        params.p.to_string(),
        params.alpha.to_string(),
        if v.holds { "holds" } else { "fails" }.to_string(),
        kind,
        lower,
        upper,
        source,
    ])
}

fn table(cli: &Cli) -> Result<Output, Failure> {
    let Command::Table { dim, alpha_grid, p_grid, b, c, domain, out } = &cli.cmd else {
        unreachable!("table dispatch");
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(["N", "p", "alpha", "validity", "kind", "lower", "upper", "source"]).map_err(io)?;
    for &p in &p_grid.0 {
        for &alpha in &alpha_grid.0 {
            let params = ProblemParams::new(*dim, p, alpha).with_b(*b).with_c(*c).with_domain(*domain);
            w.write_record(table_row(&params)?).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    match out {
        Some(path) => {
            fs::File::create(path)
                .and_then(|mut f| f.write_all(text.as_bytes()))
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            Ok(Output { text: String::new(), violation: false })
        }
        None => Ok(Output { text, violation: false }),
    }
}

fn build_profile(params: &ProblemParams, n: u32, spec: &ProfileSpec, run: &RunArgs) -> Result<RadialProfile, Failure> {
    Ok(match *spec {
        ProfileSpec::Witness(eta) => {
            params.validate()?;
            let eta = eta.unwrap_or_else(|| nearest_parameter(params, n));
            rellich_witness(params, eta, &run.cutoff()?)
        }
        ProfileSpec::Plateau { lo, hi, t } => RadialProfile::plateau(lo, hi, t),
        ProfileSpec::Random(i) => sample_profiles(i + 1, run.seed).pop().expect("count is positive"),
    })
}

fn describe_profile(spec: &ProfileSpec) -> String {
    match spec {
        ProfileSpec::Witness(None) => "witness".into(),
        ProfileSpec::Witness(Some(eta)) => format!("witness:{eta}"),
        ProfileSpec::Plateau { lo, hi, t } => format!("plateau:{lo},{hi},{t}"),
        ProfileSpec::Random(i) => format!("random:{i}"),
    }
}

fn quotient_for(params: &ProblemParams, n: u32, f: &RadialProfile, spec: &QuadratureSpec) -> Result<QuotientReport, Failure> {
    Ok(match params.domain {
        Domain::HalfSpace => halfspace_rellich_quotient(params, HarmonicIndex::zonal(params.dim, n), f, spec)?,
        _ => rellich_quotient(params, n, f, spec)?,
    })
}

fn witness(family: &WitnessCommand, run: &RunArgs, spec: &QuadratureSpec) -> Result<(Value, bool), Failure> {
    let (v, violation) = match family {
        WitnessCommand::Hardy(a) => {
            let f = hardy_witness(a.eps, a.m, a.beta, a.p, a.dim)?;
            let pair = hardy_lhs_rhs_radial(&f, a.beta, a.p, a.dim, spec)?;
            let constant = ((a.dim as f64 + a.beta - a.p) / a.p).abs().powf(a.p);
            let v = json!({
                "family": "hardy",
                "params": { "N": a.dim, "p": a.p, "beta": a.beta, "eps": a.eps, "m": a.m },
                "norms": pair,
                "quotient": pair.quotient(),
                "predicted": constant,
            });
            (v, false)
        }
        WitnessCommand::HalfspaceHardy(a) => {
            let w = halfspace_hardy_witness(a.eps, a.m, a.beta, a.p, a.dim)?;
            let pair = halfspace_hardy_quadrature(&w, a.beta, a.p, a.dim, spec)?;
            let v = json!({
                "family": "halfspace_hardy",
                "params": { "N": a.dim, "p": a.p, "beta": a.beta, "eps": a.eps, "m": a.m },
                "norms": pair,
                "quotient": pair.quotient(),
            });
            (v, false)
        }
        WitnessCommand::Rellich { problem, n, eta } => {
            let params = problem.params();
            let f = build_profile(&params, *n, &ProfileSpec::Witness(*eta), run)?;
            let r = quotient_for(&params, *n, &f, spec)?;
            let v = json!({
                "family": "rellich",
                "params": params,
                "n": n,
                "eta": eta.unwrap_or_else(|| nearest_parameter(&params, *n)),
                "cutoff": run.cutoff()?,
                "norms": { "numerator": r.numerator, "denominator": r.denominator },
                "quotient": r.quotient,
                "power_quotient": r.power_quotient,
                "predicted": r.predicted,
                "verdict": r.verdict,
                "verdict_tol": VERDICT_TOL,
            });
            (v, r.verdict == Verdict::ViolatesBound)
        }
        WitnessCommand::Cz2 { p, m, alpha } => {
            let alpha = alpha.unwrap_or(2.0 - 2.0 / p);
            let u = cz2_counterexample(*m, *p, &Factor::Bump { start: 1.0, end: 2.0 })?;
            let r = cz_quotient_radial(2, Exponent::new(*p)?, alpha, &u, spec)?;
            let v = json!({
                "family": "cz2",
                "params": { "N": 2, "p": p, "alpha": alpha, "m": m },
                "norms": { "hessian": r.numerator, "laplacian": r.denominator },
                "quotient": r.quotient,
            });
            (v, false)
        }
    };
    Ok((with_command("witness", v), violation))
}

fn verify(suite: &str, run: &RunArgs) -> Result<Output, Failure> {
    if !SUITES.contains(&suite) {
        return Err(Failure::Usage(format!("unknown suite '{suite}'; expected one of {}", SUITES.join(", "))));
    }
    let checks = run_suite(suite, run.seed)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    let text = match run.format {
        Format::Json => {
            let mut lines = vec![json!({ "schema": SCHEMA, "command": "verify", "suite": suite, "seed": run.seed }).to_string()];
            lines.extend(checks.iter().map(|c| to_value(c).to_string()));
            lines.push(json!({ "suite": suite, "checks": checks.len(), "failed": failed }).to_string());
            lines.join("\n") + "\n"
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Usage(e.to_string());
            w.write_record(["check", "expected", "got", "tol", "relation", "pass"]).map_err(io)?;
            for c in &checks {
                let rel = to_value(&c.relation).as_str().unwrap_or_default().to_string();
                w.write_record([c.check.clone(), c.expected.to_string(), c.got.to_string(), c.tol.to_string(), rel, c.pass.to_string()])
                    .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?).expect("csv output is utf-8")
        }
        Format::Text => {
            let mut s: String = checks.iter().map(text_line).collect();
            s.push_str(&format!("{} of {} checks passed\n", checks.len() - failed, checks.len()));
            s
        }
    };
    Ok(Output { text, violation: failed > 0 })
}

fn text_line(c: &Check) -> String {
    format!(
        "{} {} expected={} got={} tol={}\n",
        if c.pass { "PASS" } else { "FAIL" },
        c.check,
        c.expected,
        c.got,
        c.tol
    )
}
