//! Exact checks of the Kac-Schwarz relations on truncated bases.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{sign_pow, Scalar};
use crate::laurent::{SeriesComparison, ZSeries};
use crate::models::{self, BasisSign, KsPair, ModelId};
use crate::qtorus::TorusOp;

/// How many failing coefficients a report keeps.
pub const RESIDUAL_LIMIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Location of a residual entry: a z-exponent, or a label for non-series checks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResidualKey {
    Exponent(i64),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub model: String,
    pub params: BTreeMap<String, i64>,
    pub status: Status,
    pub residual: Vec<(ResidualKey, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, model: impl ToString) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            model: model.to_string(),
            params: BTreeMap::new(),
            status: Status::Pass,
            residual: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: i64) -> CheckReport {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Record a failing entry; the report flips to fail.
    pub fn push(&mut self, key: ResidualKey, value: impl ToString) {
        self.status = Status::Fail;
        if self.residual.len() < RESIDUAL_LIMIT {
            self.residual.push((key, value.to_string()));
        }
    }

    pub fn fail_with(&mut self, label: impl Into<String>, value: impl ToString) {
        self.push(ResidualKey::Label(label.into()), value);
    }

    /// Push every nonzero coefficient of a residual series.
    pub fn absorb_series(&mut self, s: &ZSeries) {
        for (e, c) in s.iter_desc() {
            self.push(ResidualKey::Exponent(e), c);
        }
    }

    pub fn absorb_comparison(&mut self, cmp: &SeriesComparison) {
        if let SeriesComparison::FirstDiscrepancy { exponent, left, right } = cmp {
            self.push(ResidualKey::Exponent(*exponent), &(left - right));
        }
    }

    /// Sort key used for deterministic merging.
    pub fn sort_key(&self) -> (String, String, Vec<(String, i64)>) {
        (
            self.check.clone(),
            self.model.clone(),
            self.params.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KsError {
    #[error("basis has {have} elements but the series reaches z^{top}; need at least {need}")]
    BasisTooShort { have: usize, top: i64, need: usize },
    #[error("basis element {0} is not of the form z^{0} + lower")]
    NotAdmissible(usize),
    #[error("sign arbitration for {model} is ambiguous: {detail}")]
    Ambiguous { model: String, detail: String },
}

/// A model with a concrete truncated basis; the basis may be mutated for negative controls.
#[derive(Clone, Debug)]
pub struct ModelInstance {
    pub model: ModelId,
    pub sign: BasisSign,
    pub order: i64,
    pub basis: Vec<ZSeries>,
    pub ks: KsPair,
}

impl ModelInstance {
    /// Basis `phi_0..=phi_jmax` at tail order `order`, with the adopted sign.
    pub fn new(model: ModelId, jmax: i64, order: i64) -> ModelInstance {
        ModelInstance::with_sign(model, jmax, order, models::adopted_sign(model))
    }

    pub fn with_sign(model: ModelId, jmax: i64, order: i64, sign: BasisSign) -> ModelInstance {
        let basis = (0..=jmax.max(0)).map(|j| models::build_phi_signed(model, j, order, sign)).collect();
        ModelInstance { model, sign, order, basis, ks: models::build_ks(model) }
    }

    pub fn phi(&self, j: i64) -> &ZSeries {
        &self.basis[j as usize]
    }

    /// Add `delta` to the coefficient of `z^exponent` in `phi_j`.
    pub fn mutate(&mut self, j: usize, exponent: i64, delta: &Scalar) {
        let s = &mut self.basis[j];
        let c = s.coeff(exponent);
        s.set(exponent, &c + delta);
    }

    pub fn jmax(&self) -> i64 {
        self.basis.len() as i64 - 1
    }
}

fn order_params(report: CheckReport, order: i64) -> CheckReport {
    report.param("N", order)
}

/// `P0 phi_0 = 0` on the reliable window.
pub fn check_annihilation(inst: &ModelInstance) -> CheckReport {
    let mut report = order_params(CheckReport::new("annihilation", inst.model), inst.order);
    let out = inst.ks.p0.apply(inst.phi(0));
    report.absorb_series(&out);
    report
}

/// `Q0 phi_j = c_j phi_{j+1}` for `j < jmax` of the instance.
pub fn check_ladder(inst: &ModelInstance, jmax: i64) -> CheckReport {
    let mut report = order_params(CheckReport::new("ladder", inst.model), inst.order).param("jmax", jmax);
    for j in 0..=jmax {
        if j + 1 > inst.jmax() {
            report.fail_with(format!("phi_{}", j + 1), "missing basis element");
            break;
        }
        let lhs = inst.ks.q0.apply(inst.phi(j));
        let rhs = inst.phi(j + 1).scale(&models::ladder_data(inst.model, j).ladder_constant);
        report.absorb_comparison(&lhs.eq_to_order(&rhs));
    }
    report
}

/// `P0 phi_j = alpha_j phi_j + beta_j phi_{j-1}` for `1 <= j <= jmax`.
pub fn check_recursion(inst: &ModelInstance, jmax: i64) -> CheckReport {
    let mut report = order_params(CheckReport::new("recursion", inst.model), inst.order).param("jmax", jmax);
    for j in 1..=jmax {
        if j > inst.jmax() {
            report.fail_with(format!("phi_{j}"), "missing basis element");
            break;
        }
        let data = models::ladder_data(inst.model, j);
        let lhs = inst.ks.p0.apply(inst.phi(j));
        let rhs = inst.phi(j).scale(&data.alpha).add(&inst.phi(j - 1).scale(&data.beta));
        report.absorb_comparison(&lhs.eq_to_order(&rhs));
    }
    report
}

/// Operator-level and action-level comparison of `[P0, Q0]` with the displayed right-hand side.
pub fn check_commutator(inst: &ModelInstance, jmax: i64) -> CheckReport {
    let mut report = CheckReport::new("commutator", inst.model).param("jmax", jmax).param("N", inst.order);
    let ks = &inst.ks;
    let rhs = models::displayed_commutator(inst.model);
    let diff = ks.p0.commutator(&ks.q0).sub(&rhs);
    for ((m, n), c) in diff.atoms() {
        report.fail_with(format!("op z^{m} E^{n}"), format!("{:?}", c.coeffs().iter().map(|s| s.to_string()).collect::<Vec<_>>()));
    }
    for j in 0..=jmax.min(inst.jmax()) {
        let phi = inst.phi(j);
        let pq = ks.p0.apply(&ks.q0.apply(phi));
        let qp = ks.q0.apply(&ks.p0.apply(phi));
        let lhs = pq.sub(&qp);
        report.absorb_comparison(&lhs.eq_to_order(&rhs.apply(phi)));
    }
    report
}

/// Descending elimination of `f` against an admissible basis. Returns the
/// coefficients and the residual, which lives strictly below `z^0`.
pub fn basis_reduce(f: &ZSeries, basis: &[ZSeries]) -> Result<(Vec<Scalar>, ZSeries), KsError> {
    for (i, b) in basis.iter().enumerate() {
        if b.top() != Some(i as i64) || !b.coeff(i as i64).is_one() {
            return Err(KsError::NotAdmissible(i));
        }
    }
    let mut rest = f.clone();
    let top = rest.top().unwrap_or(-1);
    if top >= basis.len() as i64 {
        return Err(KsError::BasisTooShort { have: basis.len(), top, need: top as usize + 1 });
    }
    let mut coeffs = vec![Scalar::zero(); basis.len()];
    for e in (0..=top).rev() {
        let c = rest.coeff(e);
        if c.is_zero() {
            continue;
        }
        rest = rest.sub(&basis[e as usize].scale(&c));
        coeffs[e as usize] = c;
    }
    Ok((coeffs, rest))
}

/// Bounds for [`check_w_constraints`]; `total` optionally caps `k + l`.
#[derive(Clone, Copy, Debug)]
pub struct WBounds {
    pub kmax: i64,
    pub lmax: i64,
    pub total: Option<i64>,
    pub jmax: i64,
}

/// `P0^k Q0^l phi_j` reduces to zero residual against the basis.
/// The instance must hold at least `jmax + lmax + 1` basis elements.
pub fn check_w_constraints(inst: &ModelInstance, bounds: WBounds) -> CheckReport {
    let mut report = order_params(CheckReport::new("w_constraints", inst.model), inst.order)
        .param("kmax", bounds.kmax)
        .param("lmax", bounds.lmax)
        .param("jmax", bounds.jmax);
    if let Some(t) = bounds.total {
        report = report.param("k+l", t);
    }
    let mut certified = i64::MAX;
    for j in 0..=bounds.jmax {
        let mut ql = inst.phi(j).clone();
        for l in 0..=bounds.lmax {
            if l > 0 {
                ql = inst.ks.q0.apply(&ql);
            }
            let mut cur = ql.clone();
            for k in 0..=bounds.kmax {
                if bounds.total.is_some_and(|t| k + l > t) {
                    break;
                }
                if k > 0 {
                    cur = inst.ks.p0.apply(&cur);
                }
                let label = format!("k={k} l={l} j={j}");
                if cur.tail_order() < 1 {
                    report.fail_with(label, "certified window is empty");
                    continue;
                }
                certified = certified.min(cur.tail_order());
                match basis_reduce(&cur, &inst.basis) {
                    Ok((_, residual)) => {
                        if !residual.is_zero() {
                            let (e, c) = residual.iter_desc().next().unwrap();
                            report.fail_with(format!("{label} z^{e}"), c);
                        }
                    }
                    Err(err) => report.fail_with(label, err),
                }
            }
        }
    }
    if certified != i64::MAX {
        report = report.param("certified", certified);
    }
    report
}

/// Which sign makes the displayed `P0` annihilate `phi_0`; exactly one must.
pub fn arbitrate_sign(model: ModelId, order: i64) -> Result<BasisSign, KsError> {
    let pass: Vec<BasisSign> = [BasisSign::Plain, BasisSign::Alternating]
        .into_iter()
        .filter(|&s| check_annihilation(&ModelInstance::with_sign(model, 0, order, s)).passed())
        .collect();
    match pass.as_slice() {
        [s] => Ok(*s),
        _ => Err(KsError::Ambiguous { model: model.to_string(), detail: format!("passing signs: {pass:?}") }),
    }
}

/// Conifold case i at `T = 0` against Marino-Vafa with `r = a`, and both conifold
/// cases at `T = 1` against `phi_j = z^j`.
pub fn check_degeneration(a: i64, jmax: i64, order: i64) -> CheckReport {
    let coni = ModelId::ConifoldI { a };
    let coni2 = ModelId::ConifoldII { a };
    let mv = ModelId::Mv { r: a };
    let mut report = CheckReport::new("degeneration", coni).param("jmax", jmax).param("N", order);
    report.note(format!("{coni} at T=0 equals {mv} under phi_j(z) -> (-1)^j phi_j(-z)"));
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    for j in 0..=jmax {
        let at_zero = models::build_phi(coni, j, order).map_coefficients(|c| c.subs_t(&zero));
        let expect = models::build_phi(mv, j, order).reflect().scale(&Scalar::from_int(sign_pow(j)));
        report.absorb_comparison(&at_zero.eq_to_order(&expect));
        for m in [coni, coni2] {
            let at_one = models::build_phi(m, j, order).map_coefficients(|c| c.subs_t(&one));
            report.absorb_comparison(&at_one.eq_to_order(&ZSeries::monomial(j, Scalar::one(), order)));
        }
    }
    let p_coni = models::build_ks(coni).p0.subs_t(&zero);
    let p_mv = models::build_ks(mv).p0.reflect();
    if p_coni != p_mv {
        report.fail_with("P0 under z -> -z", p_coni.sub(&p_mv));
    }
    report.note("P0 of the conifold case at T=0 equals the Marino-Vafa P0 conjugated by z -> -z");
    report
}

/// The exponential form and the closed form of `phi_j` agree.
pub fn check_exp_form(model: ModelId, jmax: i64, order: i64) -> CheckReport {
    let mut report = CheckReport::new("exp_form", model).param("jmax", jmax).param("N", order);
    let sign = exp_form_sign(model);
    if sign != models::adopted_sign(model) {
        report.note(format!("exponential form carries the {sign:?} sign; the adopted closed form differs by (-1)^n"));
    }
    for j in 0..=jmax {
        let lhs = models::exp_form_phi(model, j, order);
        let rhs = models::build_phi_signed(model, j, order, sign);
        report.absorb_comparison(&lhs.eq_to_order(&rhs));
    }
    report
}

/// Sign produced by the exponential form: only Marino-Vafa deviates from the adopted one.
pub fn exp_form_sign(model: ModelId) -> BasisSign {
    match model {
        ModelId::Mv { .. } => BasisSign::Alternating,
        _ => models::adopted_sign(model),
    }
}

/// Apply an operator then subtract a multiple of another series; used by tests and benches.
pub fn residual_of(op: &TorusOp, f: &ZSeries, expect: &ZSeries) -> ZSeries {
    op.apply(f).sub(expect)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_shape() {
        let mut r = CheckReport::new("ladder", ModelId::Mv { r: 2 }).param("N", 40);
        r.push(ResidualKey::Exponent(-3), Scalar::q_half_pow(3));
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(
            v,
            serde_json::json!({
                "check": "ladder",
                "model": "mv:r=2",
                "params": {"N": 40},
                "status": "fail",
                "residual": [[-3, "q^(3/2)"]]
            })
        );
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn hurwitz_suite() {
        let inst = ModelInstance::new(ModelId::Hurwitz, 6, 20);
        assert!(check_annihilation(&inst).passed());
        assert!(check_ladder(&inst, 5).passed());
        assert!(check_recursion(&inst, 6).passed());
        assert!(check_commutator(&inst, 3).passed());
    }

    #[test]
    fn mutation_is_detected() {
        let mut inst = ModelInstance::new(ModelId::Mv { r: 2 }, 1, 10);
        inst.mutate(0, -1, &Scalar::one());
        let r = check_annihilation(&inst);
        assert!(!r.passed());
        assert!(r.residual.iter().any(|(k, _)| *k == ResidualKey::Exponent(-1)));
    }

    #[test]
    fn arbitration_agrees_with_adopted() {
        for m in ModelId::catalogue() {
            assert_eq!(arbitrate_sign(m, 12).unwrap(), models::adopted_sign(m), "{m}");
        }
    }

    #[test]
    fn reduce_examples() {
        let inst = ModelInstance::new(ModelId::Hurwitz, 5, 15);
        let (c, r) = basis_reduce(inst.phi(2), &inst.basis).unwrap();
        assert!(r.is_zero());
        let expect: Vec<Scalar> = (0..6).map(|i| if i == 2 { Scalar::one() } else { Scalar::zero() }).collect();
        assert_eq!(c, expect);
        // z phi_0 stays in V only at u = 1.
        let one = BigRational::from_integer(1.into());
        let at_one = |s: &ZSeries| s.map_coefficients(|c| c.subs_q(&one).unwrap());
        let zphi = inst.phi(0).shift(1);
        let basis_one: Vec<ZSeries> = inst.basis.iter().map(at_one).collect();
        assert!(basis_reduce(&at_one(&zphi), &basis_one).unwrap().1.is_zero());
        let (_, generic) = basis_reduce(&zphi, &inst.basis).unwrap();
        let half = Scalar::from_ratio(1, 2);
        let expect = &half * &(&(&Scalar::q_pow(-1) - &Scalar::from_int(2)) + &Scalar::q_pow(1));
        assert_eq!(generic.coeff(-1), expect);
        let stray = ZSeries::monomial(-1, Scalar::one(), 15);
        assert!(!basis_reduce(&stray, &inst.basis).unwrap().1.is_zero());
        let high = ZSeries::monomial(9, Scalar::one(), 15);
        assert!(matches!(basis_reduce(&high, &inst.basis), Err(KsError::BasisTooShort { need: 10, .. })));
    }

    #[test]
    fn w_constraints_small() {
        let inst = ModelInstance::new(ModelId::Mv { r: 1 }, 6, 12);
        let r = check_w_constraints(&inst, WBounds { kmax: 2, lmax: 2, total: Some(2), jmax: 3 });
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn commutator_examples() {
        for m in [ModelId::Mv { r: 3 }, ModelId::ConifoldI { a: 1 }, ModelId::ConifoldII { a: 2 }] {
            let inst = ModelInstance::new(m, 2, 8);
            assert!(check_commutator(&inst, 2).passed(), "{m}");
        }
        let ks = models::build_ks(ModelId::ConifoldII { a: 2 });
        let c = ks.p0.commutator(&ks.q0);
        let one_minus = &Scalar::one() - &Scalar::q_pow(-1);
        let expect = TorusOp::atom(one_minus.clone(), 1, 1)
            .sub(&TorusOp::atom(&one_minus * &Scalar::q_half_pow(-3), 0, -1));
        assert_eq!(c, expect);
    }

    #[test]
    fn degeneration_small() {
        assert!(check_degeneration(1, 3, 10).passed());
    }

    #[test]
    fn exp_form_small() {
        for m in [ModelId::Mv { r: 0 }, ModelId::ConifoldI { a: 1 }, ModelId::ConifoldII { a: 0 }] {
            let r = check_exp_form(m, 2, 6);
            assert!(r.passed(), "{r:?}");
        }
    }
}
