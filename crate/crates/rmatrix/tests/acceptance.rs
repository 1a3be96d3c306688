//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria carry a documented known failure (see `KNOWN`); they still
//! print FAIL, but only unexpected failures make the process exit non-zero.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rmatrix::builder::{eigenvalues, xi_quantum, xi_trig};
use rmatrix::check::{run_trials, Summary, TrialConfig};
use rmatrix::grading::{boldface_strip, strip_grading, GradingVector};
use rmatrix::rmt::expected_count;
use rmatrix::sample::Domain;
use rmatrix::scalar::Ctx;
use rmatrix::sparse::{residuals, SparseOperator};
use rmatrix::spectral::{expected_counts, expected_trace, limit_deviation, projectors_of};
use rmatrix::ybe::{mutation_identity, residual, CheckOptions, Identity, Mutation};
use rmatrix::{instantiate, Backend, Kind, ParamPoint, SparseTensor4, TableStore, Variant};

const SEED: u64 = 42;
const TRIALS: usize = 20;

type Criterion = (u8, &'static str, Duration, fn(&TableStore) -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// Criteria expected to fail, with the reason.
const KNOWN: &[(u8, &str)] = &[
    (1, "758/65536 = 1.157% rounds to 1.2, table prints 1.1"),
    (6, "deviation decays like q^-2u; at q=1.1, u=40 it is ~1e-4..2e-3 > 1e-4"),
];

fn generic() -> ParamPoint {
    ParamPoint::new(1.3, 0.7, 0.37).with_v(-0.81)
}

fn c1(s: &TableStore) -> Outcome {
    let quantum = [5, 26, 139, 758];
    let printed = [31.3, 10.2, 3.4, 1.1];
    let mut counts_ok = true;
    let mut pct = Vec::new();
    for m in 1..=4u8 {
        let t = s.get(m, Kind::Trig, Variant::Corrected).unwrap().entry_count();
        let q = s.get(m, Kind::Quantum, Variant::Corrected).unwrap().entry_count();
        counts_ok &= t == 6usize.pow(m as u32) && t == expected_count(m, Kind::Trig) && q == quantum[m as usize - 1];
        pct.push((1000.0 * q as f64 / (1u64 << (4 * m)) as f64).round() / 10.0);
    }
    let pct_ok = pct == printed;
    Outcome::new(counts_ok && pct_ok, format!("counts {}; sparsity {pct:?} vs {printed:?}", if counts_ok { "exact" } else { "WRONG" }))
}

fn c2(s: &TableStore) -> Outcome {
    let p = generic();
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut counts = Vec::new();
    for m in 1..=4u8 {
        let ps = projectors_of::<f64>(s.get(m, Kind::Trig, Variant::Corrected).unwrap(), &s.helpers, &p).unwrap();
        let c = ps.counts();
        pass &= c == expected_counts(m);
        for (k, tr) in ps.traces().iter().enumerate() {
            worst = worst.max((tr - expected_trace(m, k + 1) as f64).abs());
        }
        counts.push(c);
    }
    pass &= worst < 1e-6;
    Outcome::new(pass, format!("counts {counts:?}; max trace error {worst:.1e}"))
}

fn trials(s: &TableStore, id: Identity, m: u8, kind: Kind, variant: Variant, tol: f64) -> Summary {
    let mut cfg = TrialConfig::new(id, TRIALS, SEED);
    cfg.opts.tolerance = Some(tol);
    let r = run_trials(Backend::Binary64, s.get(m, kind, variant).unwrap(), &s.helpers, &cfg).unwrap();
    Summary::of(&r)
}

fn c3(s: &TableStore) -> Outcome {
    let mut pass = true;
    let mut worst = Vec::new();
    for id in [Identity::Gybe, Identity::Tybe] {
        for m in 1..=3u8 {
            let sum = trials(s, id, m, Kind::Trig, Variant::Corrected, 1e-9);
            pass &= sum.pass && sum.passed == TRIALS;
            worst.push(format!("{id} m{m} {:.1e}", sum.worst_rel));
        }
    }
    Outcome::new(pass, format!("worst rel: {}", worst.join(", ")))
}

fn c4(s: &TableStore) -> Outcome {
    let mut pass = true;
    let mut worst = Vec::new();
    for m in 1..=4u8 {
        let sum = trials(s, Identity::Qybe, m, Kind::Quantum, Variant::Corrected, 1e-9);
        pass &= sum.pass;
        worst.push(format!("m{m} {:.1e}", sum.worst_rel));
    }
    Outcome::new(pass, format!("worst rel: {}", worst.join(", ")))
}

fn c5(s: &TableStore) -> Outcome {
    let mut passing = Vec::new();
    let mut detail = Vec::new();
    for variant in [Variant::Literal, Variant::Corrected] {
        let sum = trials(s, Identity::Tybe, 4, Kind::Trig, variant, 1e-8);
        if sum.pass {
            passing.push(variant.to_string());
        }
        detail.push(format!("{variant} {}/{} worst {:.1e}", sum.passed, sum.trials, sum.worst_rel));
    }
    Outcome::new(!passing.is_empty(), format!("selector: passing={passing:?}; {}", detail.join(", ")))
}

fn c6(s: &TableStore) -> Outcome {
    let mut pass = true;
    let mut worst = Vec::new();
    for m in 1..=4u8 {
        let trig = s.get(m, Kind::Trig, Variant::Corrected).unwrap();
        let quantum = s.get(m, Kind::Quantum, Variant::Corrected).unwrap();
        let mut over = Vec::new();
        let mut max40 = 0.0f64;
        for q in [1.1, 1.15, 1.2, 1.25, 1.3] {
            let d = limit_deviation::<f64>(trig, quantum, &s.helpers, q, 0.7, &[20.0, 40.0, 60.0]).unwrap();
            pass &= d[0] > d[1] && d[1] > d[2];
            if d[1] >= 1e-4 {
                pass = false;
                over.push(format!("q={q}:{:.2e}", d[1]));
            }
            max40 = max40.max(d[1]);
        }
        worst.push(format!("m{m} max@40 {max40:.2e}{}", if over.is_empty() { String::new() } else { format!(" over [{}]", over.join(" ")) }));
    }
    Outcome::new(pass, worst.join("; "))
}

fn c7(s: &TableStore) -> Outcome {
    let dom = Domain::default();
    let (mut zero, mut inv, mut strip) = (0.0f64, 0.0f64, 0.0f64);
    let mut exact = true;
    for t in s.tables() {
        let g = GradingVector::new(t.m);
        exact &= t.entries().all(|(_, e)| g.conserves(e.quad));
    }
    for m in 1..=4u8 {
        let g = GradingVector::new(m);
        for kind in [Kind::Trig, Kind::Quantum] {
            let t = s.get(m, kind, Variant::Corrected).unwrap();
            let flipped = boldface_strip(t);
            for p in dom.sample_many(m, false, SEED, 5) {
                let graded = instantiate::<f64>(t, &p, true, &s.helpers).unwrap();
                let stripped = strip_grading(&graded, &g).unwrap();
                let bold = instantiate::<f64>(&flipped, &p, true, &s.helpers).unwrap();
                strip = strip.max(stripped.max_abs_diff(&bold) / graded.max_abs());
                exact &= strip_grading(&stripped, &g).unwrap() == graded;
                if kind == Kind::Trig {
                    let x0 = instantiate::<f64>(t, &p.at_u(0.0), true, &s.helpers).unwrap();
                    zero = zero.max(x0.max_abs_diff(&SparseTensor4::identity(m)));
                    let a = SparseOperator::from_tensor(&instantiate::<f64>(t, &p, false, &s.helpers).unwrap());
                    let b = SparseOperator::from_tensor(&instantiate::<f64>(t, &p.at_u(-p.u), false, &s.helpers).unwrap());
                    inv = inv.max(residuals(&a.compose(&b), &SparseOperator::identity(a.dim)).max);
                }
            }
        }
    }
    let pass = zero < 1e-12 && inv < 1e-9 && strip < 1e-12 && exact;
    Outcome::new(pass, format!("R(0)-I {zero:.1e}; R(u)R(-u)-I {inv:.1e}; strip vs bold {strip:.1e}; involution+conservation {}", if exact { "exact" } else { "BROKEN" }))
}

fn c8(s: &TableStore) -> Outcome {
    let p = generic();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut jobs = Vec::new();
    for m in 1..=4u8 {
        for kind in [Kind::Trig, Kind::Quantum] {
            let t = s.get(m, kind, Variant::Corrected).unwrap();
            for (_, e) in t.entries().choose_multiple(&mut rng, 50) {
                jobs.push((t, e.quad));
            }
        }
    }
    let base: f64 = [Kind::Trig, Kind::Quantum]
        .iter()
        .flat_map(|&k| (1..=4u8).map(move |m| (m, k)))
        .map(|(m, k)| {
            let t = s.get(m, k, Variant::Corrected).unwrap();
            residual::<f64>(mutation_identity(k), t, &s.helpers, &p, &CheckOptions::default()).unwrap().comp
        })
        .fold(0.0, f64::max);
    let weakest = jobs
        .par_iter()
        .map(|(t, quad)| {
            let opts = CheckOptions { mutation: Some(Mutation { quad: *quad, factor: 1.01 }), ..Default::default() };
            residual::<f64>(mutation_identity(t.kind), t, &s.helpers, &p, &opts).unwrap().comp
        })
        .reduce(|| f64::INFINITY, f64::min);
    Outcome::new(
        weakest > 1e-3 && base < 1e-6,
        format!("{} mutants, weakest componentwise residual {weakest:.2e} (unmutated {base:.1e})", jobs.len()),
    )
}

fn c9(s: &TableStore) -> Outcome {
    let mut diag = 0.0f64;
    for p in Domain::default().sample_many(2, false, SEED, 10) {
        let ctx = Ctx::<f64>::new(&p).unwrap();
        let m1 = instantiate::<f64>(s.get(1, Kind::Quantum, Variant::Corrected).unwrap(), &p, true, &s.helpers).unwrap();
        let m2 = instantiate::<f64>(s.get(2, Kind::Quantum, Variant::Corrected).unwrap(), &p, true, &s.helpers).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        diag = diag
            .max(rel(*m1.get([1, 1, 1, 1]).unwrap(), xi_quantum(1, &ctx)))
            .max(rel(*m1.get([2, 2, 2, 2]).unwrap(), xi_quantum(2, &ctx)))
            .max(rel(*m2.get([4, 4, 4, 4]).unwrap(), xi_quantum(3, &ctx)))
            .max(rel(p.q.powf(4.0 * p.alpha + 2.0), xi_quantum(3, &ctx)));
    }
    let p = generic();
    let ctx = Ctx::<f64>::new(&p).unwrap();
    let mut eig = 0.0f64;
    for m in 1..=4u8 {
        let t = s.get(m, Kind::Trig, Variant::Corrected).unwrap();
        let ps = projectors_of::<f64>(t, &s.helpers, &p).unwrap();
        let x = instantiate::<f64>(t, &p, false, &s.helpers).unwrap();
        eig = eig.max(ps.eigen_residual(&x, &eigenvalues(Kind::Trig, m, &ctx)));
        debug_assert_eq!(eigenvalues(Kind::Trig, m, &ctx)[0], xi_trig(1, &ctx));
    }
    Outcome::new(diag < 1e-13 && eig < 1e-9, format!("diagonal match {diag:.1e}; R P_k - Xi_k P_k {eig:.1e}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let s = TableStore::embedded();
    let criteria: [Criterion; 9] = [
        (1, "table counts and sparsity", Duration::from_secs(1), c1),
        (2, "projector sizes and traces", Duration::from_secs(30), c2),
        (3, "graded and ungraded TYBE, m=1..3", Duration::from_secs(60), c3),
        (4, "QYBE, m=1..4", Duration::from_secs(120), c4),
        (5, "m=4 TYBE variant gate", Duration::from_secs(300), c5),
        (6, "spectral limit", Duration::from_secs(30), c6),
        (7, "structural identities", Duration::from_secs(30), c7),
        (8, "mutation sensitivity", Duration::from_secs(120), c8),
        (9, "eigenvalue formulas", Duration::from_secs(30), c9),
    ];
    let mut unexpected = 0;
    for (n, name, budget, f) in criteria {
        let t0 = Instant::now();
        let out = f(&s);
        let took = t0.elapsed();
        let in_time = took <= budget;
        let pass = out.pass && in_time;
        let known = KNOWN.iter().find(|(k, _)| *k == n).map(|(_, why)| *why);
        let tag = match (pass, known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => {
                unexpected += 1;
                "FAIL"
            }
        };
        let time = format!("{:.2}s/{}s{}", took.as_secs_f64(), budget.as_secs(), if in_time { "" } else { " OVER BUDGET" });
        println!("criterion {n} [{name}]: {tag} — {} ({time})", out.detail);
        if let (false, Some(why)) = (pass, known) {
            println!("    known: {why}");
        }
    }
    println!("acceptance: {unexpected} unexpected failure(s), {:.1}s total", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
