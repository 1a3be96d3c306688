use std::collections::HashMap;
use std::time::Instant;

use serde_json::{json, Value};

use rmatrix::builder::{eigenvalues, instantiate};
use rmatrix::check::{run_trials, Summary, TrialConfig};
use rmatrix::rmt::{emit_rmt, validate_table, Quad, RTable};
use rmatrix::sample::Domain;
use rmatrix::scalar::Ctx;
use rmatrix::sparse::{residuals, SparseOperator};
use rmatrix::spectral::{expected_counts, expected_trace, limit_deviation, projectors_of};
use rmatrix::ybe::{check, default_tolerance, CheckOptions, CheckReport, Identity};
use rmatrix::{Backend, Hp, Kind, ParamPoint, Real, TableStore, Variant};

use crate::args::*;
use crate::output::{num, sig17, to_value, write_csv, write_json, write_text, SCHEMA_VERSION};
use crate::CliError;

/// Overall result of a command, mapped to the exit code by `main`.
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    fn of(pass: bool) -> Outcome {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

fn single_variant(v: VariantArg) -> Result<Variant, CliError> {
    match v {
        VariantArg::Literal => Ok(Variant::Literal),
        VariantArg::Corrected => Ok(Variant::Corrected),
        VariantArg::All => Err(CliError::Usage("--variant all is only accepted by verify and validate-tables".into())),
    }
}

fn no_rmt(f: Format, cmd: &str) -> Result<(), CliError> {
    if f == Format::Rmt {
        return Err(CliError::Usage(format!("--format rmt is only accepted by emit (not {cmd})")));
    }
    Ok(())
}

fn table_meta(t: &RTable) -> Value {
    json!({ "m": t.m, "kind": t.kind, "variant": t.variant })
}

// ---------------------------------------------------------------- emit

/// Components at or below this fraction of the largest are not printed.
const EMIT_ZERO: f64 = 1e-13;

fn emit_records<R: Real>(t: &RTable, store: &TableStore, p: &ParamPoint, graded: bool) -> Result<Vec<(Quad, R, bool)>, CliError> {
    let bold: HashMap<Quad, bool> = t.entries().map(|(_, e)| (e.quad, e.bold)).collect();
    let tensor = instantiate::<R>(t, p, graded, &store.helpers)?;
    let cut = EMIT_ZERO * tensor.max_abs();
    Ok(tensor
        .iter()
        .filter(|(_, v)| v.to_f64().abs() > cut)
        .map(|(q, v)| (*q, v.clone(), bold.get(q).copied().unwrap_or(false)))
        .collect())
}

fn json_value<R: Real>(x: &R) -> Value {
    match R::BACKEND {
        Backend::Binary64 => num(x.to_f64()),
        Backend::HighPrecision => Value::String(x.to_decimal()),
    }
}

fn text_value<R: Real>(x: &R) -> String {
    match R::BACKEND {
        Backend::Binary64 => sig17(x.to_f64()),
        Backend::HighPrecision => x.to_decimal(),
    }
}

fn emit_as<R: Real>(a: &EmitArgs, t: &RTable, store: &TableStore) -> Result<(), CliError> {
    let p = ParamPoint::new(a.point.q, a.point.alpha, a.point.u);
    let graded = !a.ungraded;
    let recs = emit_records::<R>(t, store, &p, graded)?;
    let out = a.output.out.as_deref();
    match a.output.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = recs
                .iter()
                .map(|([i, k, j, l], v, b)| vec![i.to_string(), k.to_string(), j.to_string(), l.to_string(), text_value(v), b.to_string()])
                .collect();
            write_csv(out, &["i", "k", "j", "l", "value", "bold"], &rows)
        }
        _ => {
            let records: Vec<Value> = recs
                .iter()
                .map(|([i, k, j, l], v, b)| json!({ "i": i, "k": k, "j": j, "l": l, "value": json_value(v), "bold": b }))
                .collect();
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "emit",
                "table": table_meta(t),
                "graded": graded,
                "backend": R::BACKEND,
                "point": to_value(&p)?,
                "zero_threshold": num(EMIT_ZERO),
                "count": records.len(),
                "records": records,
            });
            write_json(out, &doc)
        }
    }
}

pub fn emit(a: &EmitArgs, store: &TableStore) -> Result<Outcome, CliError> {
    let t = store.get(a.m, a.kind.into(), single_variant(a.variant)?)?;
    if a.output.format == Format::Rmt {
        write_text(a.output.out.as_deref(), &emit_rmt(t))?;
        return Ok(Outcome::Pass);
    }
    match Backend::from(a.output.backend) {
        Backend::Binary64 => emit_as::<f64>(a, t, store)?,
        Backend::HighPrecision => emit_as::<Hp>(a, t, store)?,
    }
    Ok(Outcome::Pass)
}

// -------------------------------------------------------------- verify

fn fixed_point_reports(a: &VerifyArgs, identity: Identity, t: &RTable, store: &TableStore, opts: &CheckOptions) -> Result<Vec<CheckReport>, CliError> {
    let (Some(q), Some(alpha), Some(u), Some(v)) = (a.q, a.alpha, a.u, a.v) else {
        return Ok(Vec::new());
    };
    let p = ParamPoint::new(q, alpha, u).with_v(v);
    let r = match Backend::from(a.output.backend) {
        Backend::Binary64 => check::<f64>(identity, t, &store.helpers, &p, opts)?,
        Backend::HighPrecision => check::<Hp>(identity, t, &store.helpers, &p, opts)?,
    };
    Ok(vec![r])
}

pub fn verify(a: &VerifyArgs, store: &TableStore) -> Result<Outcome, CliError> {
    no_rmt(a.output.format, "verify")?;
    let identity = Identity::from(a.identity);
    let kind = a.kind.map(Kind::from).unwrap_or(if identity == Identity::Qybe { Kind::Quantum } else { Kind::Trig });
    let backend = Backend::from(a.output.backend);
    let mut cfg = TrialConfig::new(identity, a.trials as usize, a.seed);
    cfg.opts.tolerance = a.tol;
    cfg.opts.signs = a.signs.into();

    let mut tables: Vec<&RTable> = Vec::new();
    for v in a.variant.variants() {
        let t = store.get(a.m, kind, v)?;
        if !tables.iter().any(|x| x.variant == t.variant) {
            tables.push(t);
        }
    }
    let mut runs = Vec::new();
    for t in &tables {
        let reports = if a.q.is_some() {
            fixed_point_reports(a, identity, t, store, &cfg.opts)?
        } else {
            run_trials(backend, t, &store.helpers, &cfg)?
        };
        runs.push((*t, Summary::of(&reports), reports));
    }
    let passing: Vec<Variant> = runs.iter().filter(|r| r.1.pass).map(|r| r.0.variant).collect();
    let pass = if a.variant == VariantArg::All { !passing.is_empty() } else { passing.len() == runs.len() };
    let tolerance = a.tol.unwrap_or_else(|| default_tolerance(identity, a.m, backend));

    let out = a.output.out.as_deref();
    if a.output.format == Format::Csv {
        let rows: Vec<Vec<String>> = runs
            .iter()
            .flat_map(|(_, _, reports)| reports.iter())
            .map(|r| {
                vec![
                    r.identity.to_string(),
                    r.m.to_string(),
                    r.kind.to_string(),
                    r.variant.to_string(),
                    r.backend.to_string(),
                    r.seed.map(|s| s.to_string()).unwrap_or_default(),
                    r.trial.map(|s| s.to_string()).unwrap_or_default(),
                    sig17(r.point.q),
                    sig17(r.point.alpha),
                    sig17(r.point.u),
                    r.point.v.map(sig17).unwrap_or_default(),
                    sig17(r.residual_max),
                    sig17(r.residual_rel),
                    sig17(r.residual_comp),
                    sig17(r.tolerance),
                    r.pass.to_string(),
                ]
            })
            .collect();
        let header = [
            "identity", "m", "kind", "variant", "backend", "seed", "trial", "q", "alpha", "u", "v", "residual_max", "residual_rel",
            "residual_comp", "tolerance", "pass",
        ];
        write_csv(out, &header, &rows)?;
    } else {
        let mut doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "identity": identity,
            "m": a.m,
            "kind": kind,
            "backend": backend,
            "seed": a.seed,
            "trials": a.trials,
            "tolerance": num(tolerance),
            "signs": to_value(&cfg.opts.signs)?,
            "runs": runs.iter().map(|(t, s, r)| Ok(json!({
                "variant": t.variant,
                "summary": to_value(s)?,
                "reports": to_value(r)?,
            }))).collect::<Result<Vec<_>, CliError>>()?,
            "pass": pass,
        });
        if a.variant == VariantArg::All {
            doc["selector"] = json!({ "passing": passing });
        }
        write_json(out, &doc)?;
    }
    Ok(Outcome::of(pass))
}

// ---------------------------------------------------------- projectors

fn projectors_as<R: Real>(a: &ProjectorArgs, t: &RTable, store: &TableStore) -> Result<(Value, bool), CliError> {
    let h = &store.helpers;
    let p = ParamPoint::new(a.point.q, a.point.alpha, a.point.u);
    let u1 = a.u1.unwrap_or(a.point.u + 0.53);
    let tol = a.tol.unwrap_or(match R::BACKEND {
        Backend::HighPrecision => 1e-20,
        Backend::Binary64 if t.m == 4 => 1e-8,
        Backend::Binary64 => 1e-9,
    });
    let trace_tol = 1e-6;
    let drift_tol = if R::BACKEND == Backend::HighPrecision { tol } else { 1e-8 };

    let ps = projectors_of::<R>(t, h, &p)?;
    let tensor = instantiate::<R>(t, &p, false, h)?;
    let traces: Vec<f64> = ps.traces().iter().map(Real::to_f64).collect();
    let expected: Vec<usize> = (1..=t.m as usize + 1).map(|k| expected_trace(t.m, k)).collect();
    let counts = ps.counts();
    let axioms = ps.axioms();
    let eigen = eigenvalues::<R>(t.kind, t.m, &Ctx::new(&p)?);
    let eigen_res = ps.eigen_residual(&tensor, &eigen);
    let recon = residuals(&ps.reconstruct(&eigen), &SparseOperator::from_tensor(&tensor)).rel;
    let drift = ps.distance(&projectors_of::<R>(t, h, &p.at_u(u1))?);

    let traces_ok = traces.iter().zip(&expected).all(|(x, e)| (x - *e as f64).abs() < trace_tol);
    let counts_ok = counts == expected_counts(t.m);
    let pass = traces_ok && counts_ok && axioms.worst() < tol && eigen_res < tol && recon < tol && drift < drift_tol;
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "projectors",
        "table": table_meta(t),
        "backend": R::BACKEND,
        "point": to_value(&p)?,
        "u1": num(u1),
        "eigenvalues": eigen.iter().map(|x| num(x.to_f64())).collect::<Vec<_>>(),
        "traces": traces.iter().map(|x| num(*x)).collect::<Vec<_>>(),
        "expected_traces": expected,
        "trace_tolerance": num(trace_tol),
        "counts": counts,
        "expected_counts": expected_counts(t.m),
        "axioms": to_value(&axioms)?,
        "eigen_residual": num(eigen_res),
        "reconstruction_residual": num(recon),
        "u_drift": num(drift),
        "u_drift_tolerance": num(drift_tol),
        "tolerance": num(tol),
        "pass": pass,
    });
    Ok((doc, pass))
}

pub fn projectors(a: &ProjectorArgs, store: &TableStore) -> Result<Outcome, CliError> {
    no_rmt(a.output.format, "projectors")?;
    let t = store.get(a.m, a.kind.into(), single_variant(a.variant)?)?;
    let (doc, pass) = match Backend::from(a.output.backend) {
        Backend::Binary64 => projectors_as::<f64>(a, t, store)?,
        Backend::HighPrecision => projectors_as::<Hp>(a, t, store)?,
    };
    if a.output.format == Format::Csv {
        let counts = doc["counts"].as_array().cloned().unwrap_or_default();
        let rows: Vec<Vec<String>> = doc["traces"]
            .as_array()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(k, tr)| {
                vec![
                    (k + 1).to_string(),
                    tr.to_string(),
                    doc["expected_traces"][k].to_string(),
                    counts[k].to_string(),
                    doc["expected_counts"][k].to_string(),
                ]
            })
            .collect();
        write_csv(a.output.out.as_deref(), &["k", "trace", "expected_trace", "count", "expected_count"], &rows)?;
    } else {
        write_json(a.output.out.as_deref(), &doc)?;
    }
    Ok(Outcome::of(pass))
}

// -------------------------------------------------------------- limits

pub const LIMIT_US: [f64; 3] = [20.0, 40.0, 60.0];

pub fn limits(a: &LimitArgs, store: &TableStore) -> Result<Outcome, CliError> {
    no_rmt(a.output.format, "limits")?;
    let variant = single_variant(a.variant)?;
    let levels: Vec<u8> = a.m.map(|m| vec![m]).unwrap_or_else(|| (1..=4).collect());
    let backend = Backend::from(a.output.backend);
    let mut rows = Vec::new();
    let mut all = true;
    for m in levels {
        let trig = store.get(m, Kind::Trig, variant)?;
        let quantum = store.get(m, Kind::Quantum, variant)?;
        let dev = match backend {
            Backend::Binary64 => limit_deviation::<f64>(trig, quantum, &store.helpers, a.q, a.alpha, &LIMIT_US)?,
            Backend::HighPrecision => limit_deviation::<Hp>(trig, quantum, &store.helpers, a.q, a.alpha, &LIMIT_US)?,
        };
        let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
        let bound_ok = dev[1] < a.tol;
        all &= decreasing && bound_ok;
        rows.push((m, trig.variant, quantum.variant, dev, decreasing, bound_ok));
    }
    let out = a.output.out.as_deref();
    if a.output.format == Format::Csv {
        let rows: Vec<Vec<String>> = rows
            .iter()
            .map(|(m, _, _, d, dec, ok)| {
                let mut r = vec![m.to_string()];
                r.extend(d.iter().map(|x| sig17(*x)));
                r.push(dec.to_string());
                r.push(ok.to_string());
                r
            })
            .collect();
        write_csv(out, &["m", "dev_u20", "dev_u40", "dev_u60", "decreasing", "below_tol"], &rows)?;
    } else {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "limits",
            "backend": backend,
            "q": num(a.q),
            "alpha": num(a.alpha),
            "u": LIMIT_US.iter().map(|x| num(*x)).collect::<Vec<_>>(),
            "tolerance": num(a.tol),
            "levels": rows.iter().map(|(m, tv, qv, d, dec, ok)| json!({
                "m": m,
                "trig_variant": tv,
                "quantum_variant": qv,
                "deviation": d.iter().map(|x| num(*x)).collect::<Vec<_>>(),
                "decreasing": dec,
                "below_tol": ok,
            })).collect::<Vec<_>>(),
            "pass": all,
        });
        write_json(out, &doc)?;
    }
    Ok(Outcome::of(all))
}

// --------------------------------------------------------------- bench

pub fn bench(a: &BenchArgs, store: &TableStore) -> Result<Outcome, CliError> {
    no_rmt(a.output.format, "bench")?;
    let variant = single_variant(a.variant)?;
    let backend = Backend::from(a.output.backend);
    let levels: Vec<u8> = a.m.map(|m| vec![m]).unwrap_or_else(|| (1..=4).collect());
    let mut rows = Vec::new();
    for m in levels {
        let t = store.get(m, Kind::Trig, variant)?;
        let p = Domain::default().sample(m, true, a.seed, 0);
        let start = Instant::now();
        let r = match backend {
            Backend::Binary64 => check::<f64>(Identity::Tybe, t, &store.helpers, &p, &CheckOptions::default())?,
            Backend::HighPrecision => check::<Hp>(Identity::Tybe, t, &store.helpers, &p, &CheckOptions::default())?,
        };
        rows.push((m, t.variant, t.entry_count(), start.elapsed().as_secs_f64(), r));
    }
    let out = a.output.out.as_deref();
    if a.output.format == Format::Csv {
        let rows: Vec<Vec<String>> =
            rows.iter().map(|(m, v, n, w, r)| vec![m.to_string(), v.to_string(), n.to_string(), sig17(*w), sig17(r.residual_rel)]).collect();
        write_csv(out, &["m", "variant", "entries", "wall_time", "residual_rel"], &rows)?;
    } else {
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": "bench",
            "identity": Identity::Tybe,
            "backend": backend,
            "seed": a.seed,
            "rows": rows.iter().map(|(m, v, n, w, r)| json!({
                "m": m,
                "variant": v,
                "entries": n,
                "point": to_value(&r.point).unwrap_or(Value::Null),
                "wall_time": num(*w),
                "residual_rel": num(r.residual_rel),
            })).collect::<Vec<_>>(),
        });
        write_json(out, &doc)?;
    }
    Ok(Outcome::Pass)
}

// ------------------------------------------------------ validate-tables

pub fn validate_tables(a: &ValidateArgs, store: &TableStore) -> Result<Outcome, CliError> {
    no_rmt(a.output.format, "validate-tables")?;
    let mut reports = Vec::new();
    for t in store.tables() {
        if a.m.is_some_and(|m| m != t.m) || a.kind.is_some_and(|k| Kind::from(k) != t.kind) {
            continue;
        }
        let wanted = match a.variant {
            VariantArg::All => true,
            // The table a lookup for this variant resolves to.
            v => store.get(t.m, t.kind, single_variant(v)?).is_ok_and(|r| r.variant == t.variant),
        };
        if wanted {
            reports.push(validate_table(t, &store.helpers));
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let sparsity = |r: &rmatrix::rmt::TableReport| 100.0 * r.count as f64 / (1u64 << (4 * r.m as u32)) as f64;
    let out = a.output.out.as_deref();
    if a.output.format == Format::Csv {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.m.to_string(),
                    r.kind.to_string(),
                    r.variant.to_string(),
                    r.count.to_string(),
                    r.expected.to_string(),
                    format!("{:.1}", (sparsity(r) * 10.0).round() / 10.0),
                    r.duplicates.len().to_string(),
                    r.grading_violations.len().to_string(),
                    r.unknown_helpers.len().to_string(),
                    r.pass.to_string(),
                ]
            })
            .collect();
        let header = ["m", "kind", "variant", "count", "expected", "sparsity_pct", "duplicates", "grading_violations", "unknown_helpers", "pass"];
        write_csv(out, &header, &rows)?;
    } else {
        let tables = reports
            .iter()
            .map(|r| {
                let mut v = to_value(r)?;
                v["sparsity_pct"] = num(sparsity(r));
                Ok(v)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let doc = json!({ "schema_version": SCHEMA_VERSION, "command": "validate-tables", "tables": tables, "pass": pass });
        write_json(out, &doc)?;
    }
    Ok(Outcome::of(pass))
}
