//! Bundles of checks shared by the command line and the acceptance tests.
//! Jobs run on the rayon pool; the merged list is sorted by [`CheckReport::sort_key`].

use rayon::prelude::*;

use crate::boson;
use crate::fermion::{self, OpSpec};
use crate::grassmann::{self, MinorConvention};
use crate::kacschwarz::{self, CheckReport, ModelInstance, WBounds};
use crate::models::ModelId;
use crate::oracle;

pub type Job = Box<dyn Fn() -> Vec<CheckReport> + Send + Sync>;

pub fn run_jobs(jobs: Vec<Job>) -> Vec<CheckReport> {
    let mut out: Vec<CheckReport> = jobs.par_iter().flat_map(|job| job()).collect();
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

/// Annihilation, ladder and recursion for one model.
pub fn kac_schwarz_core(model: ModelId, order: i64, jmax: i64) -> Vec<CheckReport> {
    let inst = ModelInstance::new(model, jmax + 1, order);
    vec![
        kacschwarz::check_annihilation(&inst),
        kacschwarz::check_ladder(&inst, jmax),
        kacschwarz::check_recursion(&inst, jmax),
    ]
}

/// The core checks plus the commutator.
pub fn kac_schwarz(model: ModelId, order: i64, jmax: i64) -> Vec<CheckReport> {
    let mut out = kac_schwarz_core(model, order, jmax);
    out.push(kacschwarz::check_commutator(&ModelInstance::new(model, jmax, order), jmax));
    out
}

pub fn w_constraints(model: ModelId, order: i64, bounds: WBounds) -> CheckReport {
    let inst = ModelInstance::new(model, bounds.jmax + bounds.lmax, order);
    kacschwarz::check_w_constraints(&inst, bounds)
}

pub fn verify_jobs(models: &[ModelId], order: i64, jmax: i64, bounds: Option<WBounds>) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for &m in models {
        jobs.push(Box::new(move || kac_schwarz(m, order, jmax)));
        if let Some(b) = bounds {
            jobs.push(Box::new(move || vec![w_constraints(m, order, b)]));
        }
    }
    jobs
}

/// The product identity with symbolic `a` and its `a = 0` specialization.
pub fn identity_jobs(x_with_a: usize, q_with_a: usize, x_zero: usize, q_zero: usize) -> Vec<Job> {
    vec![
        Box::new(move || vec![boson::q_product_identity_check(x_with_a, q_with_a, true)]),
        Box::new(move || vec![boson::q_product_identity_check(x_zero, q_zero, false)]),
    ]
}

/// The operators whose fermionic and bosonic actions must agree.
pub fn bf_operators() -> Vec<OpSpec> {
    let mut ops: Vec<OpSpec> = (1..=4).flat_map(|m| [OpSpec::Alpha(m), OpSpec::Alpha(-m)]).collect();
    ops.extend([OpSpec::L(0), OpSpec::L(1), OpSpec::L(-1), OpSpec::K0]);
    ops
}

pub fn bf_jobs(d_max: usize) -> Vec<Job> {
    let mut jobs: Vec<Job> = vec![
        Box::new(move || vec![fermion::check_bf_schur(d_max)]),
        Box::new(move || vec![fermion::check_k0_eigenvalues(d_max)]),
    ];
    for op in bf_operators() {
        jobs.push(Box::new(move || vec![fermion::cross_check_operator(op, d_max)]));
    }
    jobs
}

pub fn wave_jobs(models: &[ModelId], order: usize) -> Vec<Job> {
    models
        .iter()
        .map(|&m| -> Job { Box::new(move || vec![grassmann::check_wave(m, order)]) })
        .collect()
}

pub fn degeneration_jobs(framings: &[i64], jmax: i64, order: i64, d_max: usize) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for &a in framings {
        jobs.push(Box::new(move || vec![kacschwarz::check_degeneration(a, jmax, order)]));
        for m in [ModelId::ConifoldI { a }, ModelId::ConifoldII { a }] {
            jobs.push(Box::new(move || vec![grassmann::check_trivial_tau(m, d_max)]));
        }
    }
    jobs
}

pub fn hurwitz_triple(d_max: usize, b_max: u32) -> CheckReport {
    grassmann::check_hurwitz_triple(d_max, b_max, MinorConvention::Standard)
}

pub fn oracle_check(d_max: usize, b_max: u32) -> CheckReport {
    oracle::check_tau_vs_oracle(d_max, b_max)
}
