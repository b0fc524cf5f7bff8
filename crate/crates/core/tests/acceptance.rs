//! One PASS/FAIL line per acceptance criterion. Runs without the test harness
//! so that the lines appear in order; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use qtlab_core::grassmann::{self, MinorConvention};
use qtlab_core::kacschwarz::{self, ModelInstance, WBounds};
use qtlab_core::suite::{self, Job};
use qtlab_core::{CheckReport, ModelId, Scalar};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_reports(reports: &[CheckReport]) -> Outcome {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}/{} {:?}", r.check, r.model, r.residual.first()))
        .collect();
    if failed.is_empty() {
        Outcome { ok: true, detail: format!("{} reports", reports.len()) }
    } else {
        Outcome { ok: false, detail: failed.join("; ") }
    }
}

fn run(jobs: Vec<Job>) -> Outcome {
    from_reports(&suite::run_jobs(jobs))
}

fn kac_schwarz() -> Outcome {
    let jobs = ModelId::catalogue()
        .into_iter()
        .map(|m| -> Job { Box::new(move || suite::kac_schwarz_core(m, 40, 8)) })
        .collect();
    run(jobs)
}

fn commutators() -> Outcome {
    let jobs = ModelId::catalogue()
        .into_iter()
        .map(|m| -> Job {
            Box::new(move || vec![kacschwarz::check_commutator(&ModelInstance::new(m, 0, 4), 0)])
        })
        .collect();
    run(jobs)
}

fn w_constraints() -> Outcome {
    let bounds = WBounds { kmax: 3, lmax: 3, total: Some(3), jmax: 4 };
    let jobs = ModelId::catalogue()
        .into_iter()
        .map(|m| -> Job { Box::new(move || vec![suite::w_constraints(m, 30, bounds)]) })
        .collect();
    run(jobs)
}

fn identities() -> Outcome {
    run(suite::identity_jobs(6, 20, 8, 25))
}

fn hurwitz_triple() -> Outcome {
    from_reports(&[suite::hurwitz_triple(5, 8)])
}

fn oracle() -> Outcome {
    from_reports(&[suite::oracle_check(5, 6)])
}

fn boson_fermion() -> Outcome {
    run(suite::bf_jobs(5))
}

fn wave() -> Outcome {
    let models: Vec<ModelId> = std::iter::once(ModelId::Hurwitz).chain((0..=3).map(|r| ModelId::Mv { r })).collect();
    run(suite::wave_jobs(&models, 8))
}

fn degeneration() -> Outcome {
    let reports = suite::run_jobs(suite::degeneration_jobs(&[-1, 0, 1, 2], 5, 20, 5));
    let mut out = from_reports(&reports);
    let recorded = reports.iter().filter(|r| r.check == "degeneration").all(|r| !r.notes.is_empty());
    if !recorded {
        out.ok = false;
        out.detail.push_str("; sign convention missing from report");
    }
    out
}

fn negative_controls() -> Outcome {
    let mut caught = Vec::new();
    let mut missed = Vec::new();
    for m in ModelId::catalogue() {
        for exponent in [-1, -4, -9] {
            let mut inst = ModelInstance::new(m, 9, 40);
            inst.mutate(0, exponent, &Scalar::one());
            let fails = !kacschwarz::check_annihilation(&inst).passed()
                || !kacschwarz::check_ladder(&inst, 8).passed()
                || !kacschwarz::check_recursion(&inst, 8).passed();
            if fails {
                caught.push(m);
            } else {
                missed.push(format!("{m} at z^{exponent}"));
            }
        }
    }
    let transposed = grassmann::check_hurwitz_triple(5, 8, MinorConvention::Transposed);
    if transposed.passed() {
        missed.push("transposed Plucker minors".to_string());
    }
    Outcome {
        ok: missed.is_empty(),
        detail: if missed.is_empty() {
            format!("{} mutations and the transposed convention all rejected", caught.len())
        } else {
            format!("not rejected: {}", missed.join(", "))
        },
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("kac-schwarz suite", kac_schwarz, Duration::from_secs(30)),
        ("commutators", commutators, Duration::from_secs(1)),
        ("w-constraints", w_constraints, Duration::from_secs(120)),
        ("q-series identities", identities, Duration::from_secs(30)),
        ("hurwitz tau triple agreement", hurwitz_triple, Duration::from_secs(60)),
        ("oracle equivalence", oracle, Duration::from_secs(120)),
        ("boson-fermion", boson_fermion, Duration::from_secs(60)),
        ("wave function", wave, Duration::from_secs(60)),
        ("degeneration", degeneration, Duration::from_secs(10)),
        ("negative controls", negative_controls, Duration::from_secs(60)),
    ];
    let mut all = true;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let status = if outcome.ok { "PASS" } else { "FAIL" };
        let over = if elapsed > *budget { " (over budget)" } else { "" };
        println!("criterion {}: {status} {name} [{:.2?}{over}] {}", i + 1, elapsed, outcome.detail);
        all &= outcome.ok;
    }
    if !all {
        std::process::exit(1);
    }
}
