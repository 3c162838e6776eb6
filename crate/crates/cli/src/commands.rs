use std::fs;
use std::io::Write;
use std::path::Path;

use multipack::bounds::{eval_bound, BoundFamily, BoundName};
use multipack::covering::{cap_code_identity, plotkin_cap_check};
use multipack::ensembles::{sample, sample_cap, EnsembleKind, EnsembleSpec};
use multipack::expurgation::construct_with;
use multipack::geometry::{verify_packing, SearchOptions};
use multipack::io::{code_to_string, parse_code, parse_grid, CurveTable, Units};
use multipack::montecarlo::{ln_gaussian_tail_exact, mc_tail};
use multipack::{Code, PackingNotion, PackingParams};
use serde_json::{json, Value};

use crate::{
    BoundsArgs, CliError, CliResult, Command, ConstructArgs, Ensemble, EnsembleArgs, Family, IdentityArgs, Notion,
    TailArgs, UnitsArg, VerifyArgs, EXIT_FAILED, EXIT_OK,
};

pub(crate) fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Command::Bounds(a) => bounds(a, out, err),
        Command::Construct(a) => construct(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Tail(a) => tail(a, out),
        Command::Identity(a) => identity(a, out),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn write_stream(w: &mut dyn Write, text: &str) -> CliResult<()> {
    w.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stream>".into(), source })
}

fn write_json(w: &mut dyn Write, doc: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(doc).expect("JSON values always serialise");
    text.push('\n');
    write_stream(w, &text)
}

fn read_code(path: &Path) -> CliResult<Code> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_code(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn notion(n: Notion) -> PackingNotion {
    match n {
        Notion::Cheb => PackingNotion::Chebyshev,
        Notion::Avg => PackingNotion::AverageRadius,
    }
}

fn notion_name(n: Notion) -> &'static str {
    match n {
        Notion::Cheb => "cheb",
        Notion::Avg => "avg",
    }
}

fn ensemble_spec(args: &EnsembleArgs, n: usize, power: f64) -> CliResult<EnsembleSpec> {
    let spec = match args.ensemble {
        Ensemble::TruncGaussian => {
            let delta = args.delta.ok_or_else(|| CliError::Input("--ensemble trunc-gaussian needs --delta".into()))?;
            EnsembleSpec::truncated_gaussian(n, power, delta, args.seed)
        }
        other => {
            if args.delta.is_some() {
                return Err(CliError::Input("--delta only applies to --ensemble trunc-gaussian".into()));
            }
            let kind = match other {
                Ensemble::Gaussian => EnsembleKind::Gaussian,
                Ensemble::Sphere => EnsembleKind::Sphere,
                Ensemble::Ball => EnsembleKind::Ball,
                Ensemble::TruncGaussian => unreachable!(),
            };
            EnsembleSpec::new(kind, n, power, args.seed)
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn ensemble_name(e: Ensemble) -> &'static str {
    match e {
        Ensemble::Gaussian => "gaussian",
        Ensemble::Sphere => "sphere",
        Ensemble::Ball => "ball",
        Ensemble::TruncGaussian => "trunc-gaussian",
    }
}

fn bounds(a: &BoundsArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let family = match a.family {
        Family::Bounded => BoundFamily::Bounded,
        Family::Unbounded => BoundFamily::Unbounded,
    };
    let grid_spec = a.grid.clone().unwrap_or_else(|| match family {
        BoundFamily::Bounded => "0.01:0.99:0.01".into(),
        BoundFamily::Unbounded => "0.001:0.1:0.001".into(),
    });
    let grid = parse_grid(&grid_spec)?;
    let units = match a.units {
        UnitsArg::Nats => Units::Nats,
        UnitsArg::Bits => Units::Bits,
    };
    let table = CurveTable::evaluate(family, a.list_size, &grid, units)?;
    let bad = table.ordering_violations();
    if !bad.is_empty() {
        for (x, msg) in &bad {
            writeln!(err, "ordering violated at x = {x}: {msg}").ok();
        }
        return Ok(EXIT_FAILED);
    }
    let csv = table.to_csv();
    match &a.out {
        Some(path) => fs::write(path, csv).map_err(io_err(path))?,
        None => write_stream(out, &csv)?,
    }
    Ok(EXIT_OK)
}

/// A number, or `<factor>*<bound>` evaluated at `(L, N/P)`.
fn parse_rate(text: &str, list_size: usize, ratio: f64) -> CliResult<f64> {
    let bad = || CliError::Input(format!("--rate must be a number or <factor>*<bound name>, got {text:?}"));
    let rate = match text.split_once('*') {
        None => text.trim().parse::<f64>().map_err(|_| bad())?,
        Some((factor, name)) => {
            let factor: f64 = factor.trim().parse().map_err(|_| bad())?;
            let name: BoundName = name.trim().parse()?;
            if name.family() != BoundFamily::Bounded {
                return Err(CliError::Input(format!("{name} is a bound for unbounded packings")));
            }
            factor * eval_bound(name, list_size, ratio)?
        }
    };
    if !(rate >= 0.0 && rate.is_finite()) {
        return Err(CliError::Input(format!("rate must be finite and non-negative, got {rate}")));
    }
    Ok(rate)
}

fn construct(a: &ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    if !(a.eps >= 0.0 && a.eps.is_finite()) {
        return Err(CliError::Input(format!("--eps must be non-negative, got {}", a.eps)));
    }
    let params = PackingParams::new(a.n, a.list_size, Some(a.power), a.noise, notion(a.notion))?;
    let rate = parse_rate(&a.rate, a.list_size, a.noise / a.power)?;
    let spec = ensemble_spec(&a.ensemble, a.n, a.power / (1.0 + a.eps))?;
    let opts = SearchOptions { parallel: true, prefilter: a.prefilter };
    let (code, report) = construct_with(&spec, &params, rate, a.m_cap, opts)?;
    let doc = json!({
        "command": "construct",
        "ensemble": ensemble_name(a.ensemble.ensemble),
        "seed": a.ensemble.seed,
        "n": a.n,
        "L": a.list_size,
        "P": a.power,
        "N": a.noise,
        "notion": notion_name(a.notion),
        "eps": a.eps,
        "rate_requested": rate,
        "initial_size": report.initial_size,
        "power_violations": report.power_violations,
        "bad_lists_found": report.bad_lists_found,
        "points_removed": report.points_removed,
        "final_size": report.final_size,
        "verified": report.verified,
        "rate_nats": report.rate_nats,
    });
    let text = code_to_string(&code);
    match &a.out {
        Some(path) => {
            fs::write(path, text).map_err(io_err(path))?;
            write_json(out, &doc)?;
        }
        None => {
            write_stream(out, &text)?;
            write_json(err, &doc)?;
        }
    }
    Ok(if report.verified { EXIT_OK } else { EXIT_FAILED })
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let code = read_code(&a.code)?;
    let power = a.power.or(code.power_limit());
    let params = PackingParams::new(code.n(), a.list_size, power, a.noise, notion(a.notion))?;
    let verdict = verify_packing(&code, &params)?;
    let doc = json!({
        "command": "verify",
        "ok": verdict.ok,
        "n": code.n(),
        "M": code.len(),
        "L": a.list_size,
        "N": a.noise,
        "P": power,
        "notion": notion_name(a.notion),
        "threshold": params.radius_sq(),
        "witness_indices": verdict.witness.as_ref().map(|w| w.indices.clone()),
        "witness_radius_sq": verdict.witness.as_ref().map(|w| w.radius_sq),
        "witness_center": verdict.witness.as_ref().map(|w| w.center.clone()),
        "power_violations": verdict.power_violations,
    });
    write_json(out, &doc)?;
    Ok(if verdict.ok { EXIT_OK } else { EXIT_FAILED })
}

fn tail(a: &TailArgs, out: &mut dyn Write) -> CliResult<i32> {
    let nn = a.n as f64 * a.noise;
    let doc = if a.exact {
        if a.ensemble.ensemble != Ensemble::Gaussian {
            return Err(CliError::Input("--exact is only available for the Gaussian ensemble".into()));
        }
        let ln_p = ln_gaussian_tail_exact(a.n, a.list_size, a.power, a.noise)?;
        json!({
            "command": "tail",
            "mode": "exact",
            "ensemble": "gaussian",
            "n": a.n,
            "L": a.list_size,
            "P": a.power,
            "N": a.noise,
            "nN": nn,
            "p": ln_p.exp(),
            "ln_p": ln_p,
            "neg_log_rate": -ln_p / a.n as f64,
        })
    } else {
        let spec = ensemble_spec(&a.ensemble, a.n, a.power)?;
        let est = mc_tail(&spec, a.list_size, nn, a.samples, a.ensemble.seed)?;
        json!({
            "command": "tail",
            "mode": "monte-carlo",
            "ensemble": ensemble_name(a.ensemble.ensemble),
            "seed": a.ensemble.seed,
            "n": est.n,
            "L": est.list_size,
            "P": a.power,
            "N": a.noise,
            "nN": est.nn,
            "samples": est.samples,
            "hits": est.hits,
            "p_hat": est.p_hat,
            "stderr": est.stderr,
            "neg_log_rate": est.neg_log_rate,
        })
    };
    write_json(out, &doc)?;
    Ok(EXIT_OK)
}

fn identity(a: &IdentityArgs, out: &mut dyn Write) -> CliResult<i32> {
    let code = match &a.code {
        Some(path) => {
            if a.n.is_some() || a.size.is_some() {
                return Err(CliError::Input("--n and --M only apply when sampling a code".into()));
            }
            let code = read_code(path)?;
            match a.power {
                Some(p) => code.with_power_limit(Some(p))?,
                None => code,
            }
        }
        None => {
            let (n, m) = match (a.n, a.size) {
                (Some(n), Some(m)) => (n, m),
                _ => return Err(CliError::Input("without a code file both --n and --M are required".into())),
            };
            let p = a.power.unwrap_or(1.0);
            match a.alpha {
                Some(alpha) => sample_cap(n, p, alpha, m, a.seed)?,
                None => sample(&EnsembleSpec::new(EnsembleKind::Sphere, n, p, a.seed), m)?,
            }
        }
    };
    let rep = cap_code_identity(&code, a.list_size)?;
    let mut doc = json!({
        "command": "identity",
        "n": code.n(),
        "M": rep.size,
        "L": rep.list_size,
        "P": code.power_limit(),
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "pair_sum_lhs": rep.pair_sum_lhs,
        "enumerated": rep.enumerated,
        "holds": rep.holds,
    });
    let mut ok = rep.holds;
    if let Some(alpha) = a.alpha {
        let chk = plotkin_cap_check(&code, alpha, a.list_size)?;
        let map = doc.as_object_mut().expect("object literal");
        map.insert("alpha".into(), json!(alpha));
        map.insert("cap_min_avg_sq_radius".into(), json!(chk.min_avg_sq_radius));
        map.insert("cap_mean_avg_sq_radius".into(), json!(chk.mean_avg_sq_radius));
        map.insert("cap_bound".into(), json!(chk.bound));
        map.insert("cap_ok".into(), json!(chk.ok));
        ok &= chk.ok;
    }
    write_json(out, &doc)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}
