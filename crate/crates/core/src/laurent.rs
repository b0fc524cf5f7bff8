//! Truncated Laurent series in `z^{-1}` with explicit reliability bookkeeping.
//!
//! A [`ZSeries`] stores coefficients for exponents in `[-tail_order, top]`.
//! Everything below `-tail_order` is unknown; operations recompute the
//! reliable window rather than silently truncating.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;

use crate::coeff::Scalar;

#[derive(Clone, Debug)]
pub struct ZSeries {
    coeffs: BTreeMap<i64, Scalar>,
    tail_order: i64,
}

/// Outcome of [`ZSeries::eq_to_order`].
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesComparison {
    Equal,
    /// Highest exponent at which the two series differ.
    FirstDiscrepancy { exponent: i64, left: Scalar, right: Scalar },
}

impl ZSeries {
    /// The zero series, exact down to `z^{-tail_order}`.
    pub fn zero(tail_order: i64) -> ZSeries {
        ZSeries { coeffs: BTreeMap::new(), tail_order }
    }

    pub fn monomial(exponent: i64, c: Scalar, tail_order: i64) -> ZSeries {
        let mut s = ZSeries::zero(tail_order);
        s.set(exponent, c);
        s
    }

    pub fn from_coefficients<I>(coeffs: I, tail_order: i64) -> ZSeries
    where
        I: IntoIterator<Item = (i64, Scalar)>,
    {
        let mut s = ZSeries::zero(tail_order);
        for (e, c) in coeffs {
            let cur = s.coeff(e);
            s.set(e, &cur + &c);
        }
        s
    }

    pub fn tail_order(&self) -> i64 {
        self.tail_order
    }

    /// Lowest exponent whose coefficient is exactly known.
    pub fn lowest_reliable(&self) -> i64 {
        -self.tail_order
    }

    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> Scalar {
        self.coeffs.get(&e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeff_ref(&self, e: i64) -> Option<&Scalar> {
        self.coeffs.get(&e)
    }

    /// Sets a coefficient; zero values and exponents outside the reliable window are dropped.
    pub fn set(&mut self, e: i64, c: Scalar) {
        if e < -self.tail_order || c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms, highest exponent first.
    pub fn iter_desc(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn truncate(&self, tail_order: i64) -> ZSeries {
        let tail_order = tail_order.min(self.tail_order);
        ZSeries {
            coeffs: self.coeffs.range(-tail_order..).map(|(e, c)| (*e, c.clone())).collect(),
            tail_order,
        }
    }

    fn combine(&self, other: &ZSeries, negate: bool) -> ZSeries {
        let tail = self.tail_order.min(other.tail_order);
        let mut out = self.truncate(tail);
        for (e, c) in other.coeffs.range(-tail..) {
            let cur = out.coeff(*e);
            out.set(*e, if negate { &cur - c } else { &cur + c });
        }
        out
    }

    pub fn add(&self, other: &ZSeries) -> ZSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &ZSeries) -> ZSeries {
        self.combine(other, true)
    }

    pub fn scale(&self, c: &Scalar) -> ZSeries {
        let mut out = ZSeries::zero(self.tail_order);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.coeffs {
            out.set(*e, v * c);
        }
        out
    }

    /// Multiply by `z^k`; the reliable window moves with the series.
    pub fn shift(&self, k: i64) -> ZSeries {
        ZSeries {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            tail_order: self.tail_order - k,
        }
    }

    /// Cauchy product. The result is reliable down to
    /// `max(-Na + top_b, -Nb + top_a)`.
    pub fn mul(&self, other: &ZSeries) -> ZSeries {
        let (ta, tb) = match (self.top(), other.top()) {
            (Some(a), Some(b)) => (a, b),
            _ => return ZSeries::zero(self.tail_order.min(other.tail_order)),
        };
        let tail = (self.tail_order - tb).min(other.tail_order - ta);
        let mut acc: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in other.coeffs.range(-tail - ea..) {
                let e = ea + eb;
                let term = ca * cb;
                let slot = acc.entry(e).or_insert_with(Scalar::zero);
                *slot = &*slot + &term;
            }
        }
        ZSeries::from_coefficients(acc, tail)
    }

    /// `exp(self)` for a series supported on strictly negative exponents.
    pub fn exp_negative(&self) -> ZSeries {
        assert!(self.top().is_none_or(|t| t < 0), "exp_negative needs a series in z^-1");
        let n = self.tail_order;
        let mut out = ZSeries::monomial(0, Scalar::one(), n);
        let mut power = ZSeries::monomial(0, Scalar::one(), n);
        for k in 1..=n.max(0) {
            power = power.mul(self).truncate(n);
            if power.is_zero() {
                break;
            }
            let inv = BigRational::new(1.into(), crate::coeff::factorial(k as u64));
            out = out.add(&power.scale(&Scalar::from_rational(inv)));
        }
        out
    }

    /// Apply `f(z) -> f(-z)`.
    pub fn reflect(&self) -> ZSeries {
        let mut out = ZSeries::zero(self.tail_order);
        for (e, c) in &self.coeffs {
            out.set(*e, if e.rem_euclid(2) == 0 { c.clone() } else { -c });
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> ZSeries {
        ZSeries::from_coefficients(self.coeffs.iter().map(|(e, c)| (*e, f(c))), self.tail_order)
    }

    /// Compare on the common reliable window.
    pub fn eq_to_order(&self, other: &ZSeries) -> SeriesComparison {
        let tail = self.tail_order.min(other.tail_order);
        let mut exps: Vec<i64> = self
            .coeffs
            .range(-tail..)
            .chain(other.coeffs.range(-tail..))
            .map(|(e, _)| *e)
            .collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.dedup();
        for e in exps {
            let (l, r) = (self.coeff(e), other.coeff(e));
            if l != r {
                return SeriesComparison::FirstDiscrepancy { exponent: e, left: l, right: r };
            }
        }
        SeriesComparison::Equal
    }

    /// Every nonzero coefficient on the reliable window, highest exponent first.
    pub fn nonzero_terms(&self) -> Vec<(i64, Scalar)> {
        self.iter_desc().map(|(e, c)| (e, c.clone())).collect()
    }

    /// TSV dump: `exponent<TAB>scalar-text`, descending exponent.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.iter_desc() {
            let _ = writeln!(out, "{e}\t{c}");
        }
        out
    }
}

impl PartialEq for ZSeries {
    fn eq(&self, other: &ZSeries) -> bool {
        self.eq_to_order(other) == SeriesComparison::Equal
    }
}
