//! Points of the big cell given by admissible bases: Plucker coordinates,
//! tau-functions and the zero-time wave function.

use rayon::prelude::*;
use thiserror::Error;

use crate::boson::{self, Partition, PPoly};
use crate::coeff::{determinant, Scalar};
use crate::kacschwarz::CheckReport;
use crate::laurent::ZSeries;
use crate::models::{self, ModelId};

#[derive(Debug, Error, PartialEq)]
pub enum GrassmannError {
    #[error("phi_{j} is not z^{j} + lower terms")]
    NotAdmissible { j: usize },
    #[error("window too small: need {need_elements} basis elements down to z^-{need_order}, have {have_elements} down to z^-{have_order}")]
    Window { need_elements: usize, need_order: i64, have_elements: usize, have_order: i64 },
    #[error("tau vanishes at zero times")]
    DegenerateTau,
}

#[derive(Clone, Debug)]
pub struct AdmissibleBasis {
    elements: Vec<ZSeries>,
    order: i64,
}

impl AdmissibleBasis {
    /// Checks unitriangularity; the shared order is the smallest tail order.
    pub fn new(elements: Vec<ZSeries>) -> Result<AdmissibleBasis, GrassmannError> {
        for (j, phi) in elements.iter().enumerate() {
            let top_ok = phi.top() == Some(j as i64) && phi.coeff(j as i64).is_one();
            if !top_ok {
                return Err(GrassmannError::NotAdmissible { j });
            }
        }
        let order = elements.iter().map(ZSeries::tail_order).min().unwrap_or(0);
        Ok(AdmissibleBasis { elements, order })
    }

    /// `phi_0 .. phi_jmax` of a catalogue model.
    pub fn from_model(model: ModelId, jmax: usize, order: i64) -> AdmissibleBasis {
        let elements = (0..=jmax as i64).map(|j| models::build_phi(model, j, order)).collect();
        AdmissibleBasis::new(elements).expect("catalogue bases are unitriangular")
    }

    /// `phi_j = z^j`.
    pub fn trivial(jmax: usize, order: i64) -> AdmissibleBasis {
        let elements = (0..=jmax as i64).map(|j| ZSeries::monomial(j, Scalar::one(), order)).collect();
        AdmissibleBasis { elements, order }
    }

    pub fn elements(&self) -> &[ZSeries] {
        &self.elements
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> AdmissibleBasis {
        AdmissibleBasis { elements: self.elements.iter().map(|e| e.map_coefficients(&f)).collect(), order: self.order }
    }
}

/// Which partition indexes the minor rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MinorConvention {
    #[default]
    Standard,
    /// Rows chosen by the conjugate partition; a negative control.
    Transposed,
}

/// Determinant of `M[i][j] = [z^{i-1-lambda_i}] phi_{j-1}`, `1 <= i, j <= n`.
pub fn plucker_sized(vb: &AdmissibleBasis, lambda: &Partition, n: usize) -> Result<Scalar, GrassmannError> {
    let n = n.max(lambda.len());
    let need_order = lambda.part(1) as i64;
    if n > vb.elements.len() || need_order > vb.order {
        return Err(GrassmannError::Window {
            need_elements: n,
            need_order,
            have_elements: vb.elements.len(),
            have_order: vb.order,
        });
    }
    let m: Vec<Vec<Scalar>> = (1..=n)
        .map(|i| {
            let row = i as i64 - 1 - lambda.part(i) as i64;
            vb.elements[..n].iter().map(|phi| phi.coeff(row)).collect()
        })
        .collect();
    Ok(determinant(&m))
}

pub fn plucker(vb: &AdmissibleBasis, lambda: &Partition) -> Result<Scalar, GrassmannError> {
    plucker_with(vb, lambda, MinorConvention::Standard)
}

pub fn plucker_with(vb: &AdmissibleBasis, lambda: &Partition, conv: MinorConvention) -> Result<Scalar, GrassmannError> {
    match conv {
        MinorConvention::Standard => plucker_sized(vb, lambda, lambda.len()),
        MinorConvention::Transposed => plucker_sized(vb, &lambda.conjugate(), lambda.conjugate().len()),
    }
}

/// `sum_{|lambda| <= d_max} pi_lambda s_lambda`.
pub fn tau_from_basis(vb: &AdmissibleBasis, d_max: usize) -> Result<PPoly<Scalar>, GrassmannError> {
    tau_from_basis_with(vb, d_max, MinorConvention::Standard)
}

pub fn tau_from_basis_with(
    vb: &AdmissibleBasis,
    d_max: usize,
    conv: MinorConvention,
) -> Result<PPoly<Scalar>, GrassmannError> {
    let terms: Vec<PPoly<Scalar>> = Partition::up_to(d_max)
        .par_iter()
        .map(|lambda| {
            let pi = plucker_with(vb, lambda, conv)?;
            Ok(if pi.is_zero() { PPoly::zero() } else { boson::schur_poly(lambda).scale(&pi) })
        })
        .collect::<Result<_, GrassmannError>>()?;
    Ok(terms.iter().fold(PPoly::zero(), |acc, t| acc.add(t)))
}

/// Sign in the Miwa substitution `p_n -> sign * xi^{-n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MiwaSign {
    #[default]
    Plus,
    Minus,
}

/// `tau(p_n -> xi^{-n}) / tau(0)` at zero times, `hbar = 1`, returned as a series in `z = xi`.
pub fn sato_wave(tau: &PPoly<Scalar>, order: i64) -> Result<ZSeries, GrassmannError> {
    sato_wave_with(tau, order, MiwaSign::Plus)
}

pub fn sato_wave_with(tau: &PPoly<Scalar>, order: i64, sign: MiwaSign) -> Result<ZSeries, GrassmannError> {
    let tau0 = tau.coeff(&Partition::empty());
    let inv = tau0.inverse().map_err(|_| GrassmannError::DegenerateTau)?;
    let mut out = ZSeries::zero(order);
    for (mu, c) in tau.terms() {
        let d = mu.size() as i64;
        if d > order {
            continue;
        }
        let flip = sign == MiwaSign::Minus && mu.len() % 2 == 1;
        let c = if flip { -c } else { c.clone() };
        out.set(-d, &out.coeff(-d) + &(&c * &inv));
    }
    Ok(out)
}

/// Three Hurwitz tau-functions through grade `d_max`: bosonic evolution, Plucker
/// expansion of the basis (symbolic `u`), and the cut-and-join ODE in `lambda`.
pub fn check_hurwitz_triple(d_max: usize, b_max: u32, conv: MinorConvention) -> CheckReport {
    let mut report = CheckReport::new("hurwitz_triple", ModelId::Hurwitz)
        .param("dmax", d_max as i64)
        .param("bmax", i64::from(b_max));
    if conv == MinorConvention::Transposed {
        report.note("transposed minor convention");
    }
    let bosonic = boson::hurwitz_tau(d_max);
    let vb = AdmissibleBasis::from_model(ModelId::Hurwitz, d_max, d_max as i64);
    let plucker_tau = match tau_from_basis_with(&vb, d_max, conv) {
        Ok(t) => t,
        Err(e) => {
            report.fail_with("plucker", e);
            return report;
        }
    };
    let diff = plucker_tau.sub(&bosonic);
    for (mu, c) in diff.terms().take(3) {
        report.fail_with(format!("plucker - bosonic at p{mu}"), c);
    }
    let expanded = match boson::lambda_expand(&bosonic, b_max) {
        Ok(t) => t,
        Err(e) => {
            report.fail_with("lambda_expand", e);
            return report;
        }
    };
    for d in 0..=d_max {
        let ode = boson::cut_join_evolution(d, b_max);
        let diff = expanded.grade_part(d).sub(&ode);
        for (mu, c) in diff.terms().take(3) {
            report.fail_with(format!("bosonic - ode at p{mu}"), c);
        }
    }
    let cj = boson::check_cut_join_equation(&expanded, b_max);
    for (k, v) in cj.residual {
        report.push(k, v);
    }
    report
}

/// `sato_wave` of the model's tau equals `phi_0` down to `z^{-order}`. The Hurwitz
/// tau comes from the bosonic evolution, the others from their Plucker expansion.
pub fn check_wave(model: ModelId, order: usize) -> CheckReport {
    let mut report = CheckReport::new("sato_wave", model).param("N", order as i64);
    let tau = match model {
        ModelId::Hurwitz => Ok(boson::hurwitz_tau(order)),
        _ => tau_from_basis(&AdmissibleBasis::from_model(model, order, order as i64), order),
    };
    let wave = tau.and_then(|t| sato_wave(&t, order as i64));
    match wave {
        Ok(w) => report.absorb_comparison(&w.eq_to_order(&models::build_phi(model, 0, order as i64))),
        Err(e) => report.fail_with("wave", e),
    }
    report
}

/// At `T = 1` the conifold bases are trivial and so is their tau.
pub fn check_trivial_tau(model: ModelId, d_max: usize) -> CheckReport {
    let mut report = CheckReport::new("trivial_tau", model).param("dmax", d_max as i64);
    let one = num_rational::BigRational::from_integer(1.into());
    let vb = AdmissibleBasis::from_model(model, d_max, d_max as i64).map_coefficients(|c| c.subs_t(&one));
    match tau_from_basis(&vb, d_max) {
        Ok(t) => {
            let diff = t.sub(&PPoly::one());
            for (mu, c) in diff.terms().take(3) {
                report.fail_with(format!("p{mu}"), c);
            }
        }
        Err(e) => report.fail_with("tau", e),
    }
    report
}
