//! The four model families: admissible bases `phi_j` and Kac-Schwarz pairs.
//!
//! Variables: `Q = q^{1/2}`; for Hurwitz `Q` plays `u = e^{lambda/2}` and
//! `E = e^{lambda D}` acts as `u^{2D}`, so the same operator action applies.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{factorial, sign_pow, Scalar};
use crate::laurent::ZSeries;
use crate::qtorus::{DPoly, TorusOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Hurwitz,
    Mv,
    ConifoldI,
    ConifoldIi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelId {
    Hurwitz,
    Mv { r: i64 },
    ConifoldI { a: i64 },
    ConifoldII { a: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown model `{0}`; expected hurwitz, mv:r=<int>, coni:a=<int> or conii:a=<int>")]
    Unknown(String),
    #[error("bad framing in `{0}`")]
    BadFraming(String),
}

impl ModelId {
    pub fn family(&self) -> Family {
        match self {
            ModelId::Hurwitz => Family::Hurwitz,
            ModelId::Mv { .. } => Family::Mv,
            ModelId::ConifoldI { .. } => Family::ConifoldI,
            ModelId::ConifoldII { .. } => Family::ConifoldIi,
        }
    }

    pub fn framing(&self) -> Option<i64> {
        match *self {
            ModelId::Hurwitz => None,
            ModelId::Mv { r } => Some(r),
            ModelId::ConifoldI { a } | ModelId::ConifoldII { a } => Some(a),
        }
    }

    pub fn has_t(&self) -> bool {
        matches!(self, ModelId::ConifoldI { .. } | ModelId::ConifoldII { .. })
    }

    /// Coefficient `kappa` in the diagonal twist `Q^{kappa (k-j)(k+j+1)}`.
    pub fn twist(&self) -> i64 {
        match *self {
            ModelId::Hurwitz => 1,
            ModelId::Mv { r } => r + 1,
            ModelId::ConifoldI { a } => a + 1,
            ModelId::ConifoldII { a } => a,
        }
    }

    /// Every model used by the acceptance suite.
    pub fn catalogue() -> Vec<ModelId> {
        let mut out = vec![ModelId::Hurwitz];
        out.extend((0..=3).map(|r| ModelId::Mv { r }));
        out.extend((-1..=2).map(|a| ModelId::ConifoldI { a }));
        out.extend((-1..=2).map(|a| ModelId::ConifoldII { a }));
        out
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Hurwitz => write!(f, "hurwitz"),
            ModelId::Mv { r } => write!(f, "mv:r={r}"),
            ModelId::ConifoldI { a } => write!(f, "coni:a={a}"),
            ModelId::ConifoldII { a } => write!(f, "conii:a={a}"),
        }
    }
}

impl FromStr for ModelId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<ModelId, ModelError> {
        let s = s.trim();
        if s == "hurwitz" {
            return Ok(ModelId::Hurwitz);
        }
        let (head, rest) = s.split_once(':').ok_or_else(|| ModelError::Unknown(s.to_string()))?;
        let (key, value) = rest.split_once('=').ok_or_else(|| ModelError::BadFraming(s.to_string()))?;
        let v: i64 = value.trim().parse().map_err(|_| ModelError::BadFraming(s.to_string()))?;
        match (head, key) {
            ("mv", "r") => Ok(ModelId::Mv { r: v }),
            ("coni", "a") => Ok(ModelId::ConifoldI { a: v }),
            ("conii", "a") => Ok(ModelId::ConifoldII { a: v }),
            ("mv" | "coni" | "conii", _) => Err(ModelError::BadFraming(s.to_string())),
            _ => Err(ModelError::Unknown(s.to_string())),
        }
    }
}

/// Overall sign pattern of the tail coefficients: `1` or `(-1)^n` at `z^{j-n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSign {
    Plain,
    Alternating,
}

impl BasisSign {
    pub fn flip(self) -> BasisSign {
        match self {
            BasisSign::Plain => BasisSign::Alternating,
            BasisSign::Alternating => BasisSign::Plain,
        }
    }
}

/// Sign convention under which the displayed `P0` annihilates `phi_0`.
/// `kacschwarz::arbitrate_sign` re-derives this from scratch.
pub fn adopted_sign(model: ModelId) -> BasisSign {
    match model {
        ModelId::ConifoldI { .. } => BasisSign::Alternating,
        _ => BasisSign::Plain,
    }
}

/// Coefficient of `z^{j-n}` in `phi_j`.
pub fn phi_coefficient(model: ModelId, j: i64, n: i64, sign: BasisSign) -> Scalar {
    let mut c = Scalar::one();
    for k in 1..=n {
        c = &c * &tail_factor(model, k);
    }
    finish_coefficient(model, j, n, sign, c)
}

/// Ratio contributed by step `k` of the product part, before the Q-monomial.
fn tail_factor(model: ModelId, k: i64) -> Scalar {
    let den = Scalar::one_minus_q(k).inverse().expect("(1-q^k) is a unit");
    match model {
        ModelId::Hurwitz => Scalar::from_ratio(1, k),
        ModelId::Mv { .. } => den,
        ModelId::ConifoldI { .. } => &Scalar::one_minus_tq(k - 1) * &den,
        // T - q^{k-1} = -q^{k-1} (1 - T q^{1-k})
        ModelId::ConifoldII { .. } => {
            let f = Scalar::one_minus_tq(1 - k).mul_q_half_pow(2 * (k - 1));
            -&(&f * &den)
        }
    }
}

fn finish_coefficient(model: ModelId, j: i64, n: i64, sign: BasisSign, product: Scalar) -> Scalar {
    let kappa = model.twist();
    let half = match model {
        ModelId::Hurwitz => 0,
        _ => n,
    };
    let mut c = product.mul_q_half_pow(kappa * n * (n - 2 * j - 1) + half);
    if sign == BasisSign::Alternating && n % 2 == 1 {
        c = -&c;
    }
    c
}

/// `phi_j` with the adopted sign, exact down to `z^{-N}`.
pub fn build_phi(model: ModelId, j: i64, order: i64) -> ZSeries {
    build_phi_signed(model, j, order, adopted_sign(model))
}

pub fn build_phi_signed(model: ModelId, j: i64, order: i64, sign: BasisSign) -> ZSeries {
    let mut product = Scalar::one();
    let mut coeffs = Vec::new();
    for n in 0..=(j + order) {
        if n > 0 {
            product = &product * &tail_factor(model, n);
        }
        coeffs.push((j - n, finish_coefficient(model, j, n, sign, product.clone())));
    }
    ZSeries::from_coefficients(coeffs, order)
}

/// Generator `g_n` of the exponential tail `exp(sum g_n z^{-n})`.
pub fn tail_generator(model: ModelId, n: i64) -> Scalar {
    // 1/(n [n]) = -Q^n / (n (1 - q^n))
    let inv_bracket = || {
        -&Scalar::one_minus_q(n)
            .inverse()
            .expect("(1-q^n) is a unit")
            .mul_q_half_pow(n)
            .scale_rational(&BigRational::new(1.into(), n.into()))
    };
    let one_minus_tn = || Scalar::from_terms([(0, 0, rat(1)), (n as u32, 0, rat(-1))]);
    let alt = Scalar::from_int(sign_pow(n - 1));
    match model {
        ModelId::Hurwitz => {
            if n == 1 {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }
        ModelId::Mv { .. } => &alt * &inv_bracket(),
        ModelId::ConifoldI { .. } => &(&alt * &one_minus_tn()) * &inv_bracket(),
        ModelId::ConifoldII { .. } => &one_minus_tn() * &inv_bracket(),
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `phi_j` from the exponential form: twist applied to `exp(sum g_n z^{-n}) z^j`.
pub fn exp_form_phi(model: ModelId, j: i64, order: i64) -> ZSeries {
    let depth = j + order;
    let g = ZSeries::from_coefficients((1..=depth).map(|n| (-n, tail_generator(model, n))), depth);
    let base = g.exp_negative().shift(j);
    let kappa = model.twist();
    let mut out = ZSeries::zero(order);
    for (k, c) in base.iter() {
        out.set(k, c.mul_q_half_pow(kappa * (k - j) * (k + j + 1)));
    }
    out
}

#[derive(Clone, Debug)]
pub struct KsPair {
    pub p0: TorusOp,
    pub q0: TorusOp,
}

pub fn build_ks(model: ModelId) -> KsPair {
    let half = Scalar::q_half_pow(1);
    let e_inv = TorusOp::e_pow(-1);
    match model {
        ModelId::Hurwitz => KsPair {
            p0: TorusOp::atom_d(DPoly::from_coeffs(vec![Scalar::zero(), Scalar::one()]), 0, 0)
                .add(&TorusOp::atom(Scalar::one(), -1, -1)),
            q0: TorusOp::atom(Scalar::one(), 1, 1),
        },
        ModelId::Mv { r } => KsPair {
            p0: TorusOp::identity().sub(&e_inv).sub(&TorusOp::atom(half, -1, -(r + 1))),
            q0: TorusOp::atom(Scalar::one(), 1, r + 1),
        },
        ModelId::ConifoldI { a } => KsPair {
            p0: TorusOp::identity()
                .sub(&e_inv)
                .add(&TorusOp::atom(half.clone(), -1, -(a + 1)))
                .sub(&TorusOp::atom(&half * &Scalar::t(), -1, -(a + 2))),
            q0: TorusOp::atom(Scalar::one(), 1, a + 1),
        },
        ModelId::ConifoldII { a } => KsPair {
            p0: TorusOp::identity()
                .sub(&e_inv)
                .add(&TorusOp::atom(half.clone(), -1, -(a + 1)))
                .sub(&TorusOp::atom(&half * &Scalar::t(), -1, -a)),
            q0: TorusOp::atom(Scalar::one(), 1, a),
        },
    }
}

/// Expected constants in `Q0 phi_j = c_j phi_{j+1}` and
/// `P0 phi_j = alpha_j phi_j + beta_j phi_{j-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderData {
    pub ladder_constant: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
}

pub fn ladder_data(model: ModelId, j: i64) -> LadderData {
    let one_minus_inv = &Scalar::one() - &Scalar::q_pow(-j);
    let beta_base = |kappa: i64| &Scalar::q_half_pow(1 - 2 * kappa * j) * &one_minus_inv;
    match model {
        ModelId::Hurwitz => LadderData {
            ladder_constant: Scalar::q_pow(j),
            alpha: Scalar::from_int(j),
            beta: Scalar::zero(),
        },
        ModelId::Mv { r } => LadderData {
            ladder_constant: Scalar::q_pow((r + 1) * j),
            alpha: one_minus_inv.clone(),
            beta: -&beta_base(r + 1),
        },
        ModelId::ConifoldI { a } => LadderData {
            ladder_constant: Scalar::q_pow((a + 1) * j),
            alpha: one_minus_inv.clone(),
            beta: beta_base(a + 1),
        },
        ModelId::ConifoldII { a } => LadderData {
            ladder_constant: Scalar::q_pow(a * j),
            alpha: one_minus_inv.clone(),
            beta: -&(&Scalar::t() * &beta_base(a)),
        },
    }
}

/// Right-hand side of the displayed commutator `[P0, Q0]`.
pub fn displayed_commutator(model: ModelId) -> TorusOp {
    let c = &Scalar::one() - &Scalar::q_pow(-1);
    match model {
        ModelId::Hurwitz => build_ks(model).q0,
        ModelId::Mv { r } => TorusOp::atom(c, 1, r),
        ModelId::ConifoldI { a } => TorusOp::atom(c.clone(), 1, a)
            .add(&TorusOp::atom(&(&c * &Scalar::t()) * &Scalar::q_half_pow(-1 - 2 * a), 0, -1)),
        ModelId::ConifoldII { a } => {
            TorusOp::atom(c.clone(), 1, a - 1).sub(&TorusOp::atom(&c * &Scalar::q_half_pow(1 - 2 * a), 0, -1))
        }
    }
}

/// `1/n!` as a Scalar.
pub fn inverse_factorial(n: u64) -> Scalar {
    Scalar::from_rational(BigRational::new(1.into(), factorial(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{qfactorial, QFactorialStyle};

    #[test]
    fn selector_round_trip() {
        for m in ModelId::catalogue() {
            assert_eq!(m.to_string().parse::<ModelId>().unwrap(), m);
        }
        assert!("mv".parse::<ModelId>().is_err());
        assert!("mv:a=1".parse::<ModelId>().is_err());
        assert!("coni:a=x".parse::<ModelId>().is_err());
        assert!("ell:a=1".parse::<ModelId>().is_err());
    }

    #[test]
    fn hurwitz_phi0_leading_terms() {
        let phi = build_phi(ModelId::Hurwitz, 0, 10);
        assert_eq!(phi.coeff(0), Scalar::one());
        assert_eq!(phi.coeff(-1), Scalar::one());
        assert_eq!(phi.coeff(-2), Scalar::q_half_pow(2).scale_rational(&BigRational::new(1.into(), 2.into())));
        assert_eq!(phi.coeff(-3), Scalar::q_half_pow(6).scale_rational(&BigRational::new(1.into(), 6.into())));
    }

    #[test]
    fn admissible_for_every_model() {
        for m in ModelId::catalogue() {
            for j in 0..=10 {
                let phi = build_phi(m, j, 3);
                assert_eq!(phi.top(), Some(j), "{m} j={j}");
                assert!(phi.coeff(j).is_one());
            }
        }
    }

    #[test]
    fn conifold_i_collapses_at_t_one() {
        for a in -1..=2 {
            for j in 0..=4 {
                let phi = build_phi(ModelId::ConifoldI { a }, j, 12).map_coefficients(|c| c.subs_t(&rat(1)));
                assert_eq!(phi.nonzero_terms(), vec![(j, Scalar::one())]);
            }
        }
    }

    #[test]
    fn mv_bracket_factorial_form_matches_product_form() {
        // (-1)^n q^{(r+1)n(n-2j-1)/2 - n(n-1)/4} / [n]!
        for r in 0..=2 {
            for j in 0..=2 {
                for n in 0..=6i64 {
                    let header = qfactorial(n as u32, &QFactorialStyle::Brackets)
                        .inverse()
                        .unwrap()
                        .mul_q_half_pow((r + 1) * n * (n - 2 * j - 1) - n * (n - 1) / 2)
                        .scale_rational(&rat(sign_pow(n)));
                    let ours = phi_coefficient(ModelId::Mv { r }, j, n, BasisSign::Plain);
                    assert_eq!(header, ours, "r={r} j={j} n={n}");
                }
            }
        }
    }

    #[test]
    fn mv_phi0_line() {
        let phi = build_phi(ModelId::Mv { r: 1 }, 0, 6);
        for n in 0..=6i64 {
            let expect = qfactorial(n as u32, &QFactorialStyle::OneMinusQ)
                .inverse()
                .unwrap()
                .mul_q_half_pow(2 * n * (n - 1) + n);
            assert_eq!(phi.coeff(-n), expect);
        }
    }

    #[test]
    fn ks_pair_display() {
        let ks = build_ks(ModelId::Mv { r: 0 });
        assert_eq!(ks.p0.to_string(), "1 - E^-1 - q^(1/2) z^-1 E^-1");
        assert_eq!(ks.q0.to_string(), "z E");
        let h = build_ks(ModelId::Hurwitz);
        assert_eq!(h.p0.to_string(), "D + z^-1 E^-1");
    }

    #[test]
    fn ladder_examples() {
        let h = ladder_data(ModelId::Hurwitz, 0);
        assert!(h.ladder_constant.is_one());
        assert!(h.alpha.is_zero());
        let m = ladder_data(ModelId::Mv { r: 2 }, 1);
        assert_eq!(m.ladder_constant, Scalar::q_pow(3));
        assert_eq!(m.alpha, &Scalar::one() - &Scalar::q_pow(-1));
        assert!(ladder_data(ModelId::ConifoldII { a: 0 }, 0).alpha.is_zero());
    }

    #[test]
    fn conifold_ii_t_factor_form() {
        // T - q^{k-1} for k = 3
        let f = -&Scalar::one_minus_tq(-2).mul_q_half_pow(4);
        let expect = &Scalar::t() - &Scalar::q_pow(2);
        assert_eq!(f, expect);
    }

    #[test]
    fn exp_form_hurwitz_matches_closed_form() {
        for j in 0..=3 {
            assert_eq!(exp_form_phi(ModelId::Hurwitz, j, 10), build_phi(ModelId::Hurwitz, j, 10));
        }
    }
}
