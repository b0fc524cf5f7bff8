//! Sparse polynomials in `T` and `Q` (the square root of `q`) over the rationals.
//!
//! Exponents of `Q` may be negative while a computation is in flight; the
//! owning [`Scalar`](super::Scalar) moves the `Q`-content into its monomial
//! prefactor so that stored numerators always start at `Q^0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Key `(t, e)` denotes the monomial `T^t Q^e`.
pub(crate) type Mono = (u32, i64);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Poly {
    pub(crate) terms: BTreeMap<Mono, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn monomial(t: u32, e: i64, c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert((t, e), c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn has_t(&self) -> bool {
        self.terms.keys().any(|&(t, _)| t > 0)
    }

    pub fn min_q(&self) -> Option<i64> {
        self.terms.keys().map(|&(_, e)| e).min()
    }

    pub fn add_term(&mut self, key: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly) {
        for (k, c) in &other.terms {
            self.add_term(*k, -c.clone());
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by `Q^e`.
    pub fn shift_q(&self, e: i64) -> Poly {
        if e == 0 {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&(t, q), c)| ((t, q + e), c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(t1, e1), c1) in &self.terms {
            for (&(t2, e2), c2) in &other.terms {
                out.add_term((t1 + t2, e1 + e2), c1 * c2);
            }
        }
        out
    }

    /// Multiply by the binomial `1 - T^t Q^e`.
    pub fn mul_one_minus(&self, t: u32, e: i64) -> Poly {
        let mut out = self.clone();
        for (&(tt, ee), c) in &self.terms {
            out.add_term((tt + t, ee + e), -c.clone());
        }
        out
    }

    /// Exact test for divisibility by `1 - Q^m` (`m > 0`, no `T`): every
    /// residue class of exponents mod `m` must sum to zero in each `T`-row.
    pub fn divisible_by_one_minus_q(&self, m: i64) -> bool {
        debug_assert!(m > 0);
        let mut classes: BTreeMap<(u32, i64), BigRational> = BTreeMap::new();
        for (&(t, e), c) in &self.terms {
            *classes.entry((t, e.rem_euclid(m))).or_insert_with(BigRational::zero) += c;
        }
        classes.values().all(Zero::is_zero)
    }

    /// Quotient by `1 - Q^m`, assuming divisibility.
    pub fn div_one_minus_q(&self, m: i64) -> Poly {
        // Per T-row: S_e = P_e + S_{e-m}, ascending in e.
        let mut out = Poly::zero();
        let mut rows: BTreeMap<u32, Vec<(i64, &BigRational)>> = BTreeMap::new();
        for (&(t, e), c) in &self.terms {
            rows.entry(t).or_default().push((e, c));
        }
        for (t, row) in rows {
            let lo = row.first().map(|x| x.0).unwrap_or(0);
            let hi = row.last().map(|x| x.0).unwrap_or(0);
            let width = (hi - lo + 1) as usize;
            let mut dense = vec![BigRational::zero(); width];
            for (e, c) in row {
                dense[(e - lo) as usize] = c.clone();
            }
            let mut quot = vec![BigRational::zero(); width];
            for i in 0..width {
                let mut v = dense[i].clone();
                if i as i64 >= m {
                    v += &quot[i - m as usize];
                }
                quot[i] = v;
            }
            // The last m entries of the running quotient are the (zero) remainder.
            let keep = width.saturating_sub(m as usize);
            for (i, c) in quot.into_iter().take(keep).enumerate() {
                out.add_term((t, lo + i as i64), c);
            }
        }
        out
    }

    /// Substitute `T := value`.
    pub fn subs_t(&self, value: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (&(t, e), c) in &self.terms {
            out.add_term((0, e), c * pow_rational(value, t as i64));
        }
        out
    }

    /// Substitute `Q := value` (value must be nonzero when negative exponents occur).
    pub fn subs_q(&self, value: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (&(t, e), c) in &self.terms {
            out.add_term((t, 0), c * pow_rational(value, e));
        }
        out
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Coefficient of `T^0 Q^0`.
    pub fn lowest_coefficient(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next()
    }
}

pub(crate) fn pow_rational(base: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

pub(crate) fn is_negative_integer(c: &BigRational) -> Option<BigInt> {
    if c.is_integer() && c.is_negative() {
        Some(-c.to_integer())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn binomial_division_roundtrip() {
        let p = Poly::monomial(1, 3, r(2)).mul_one_minus(0, 4);
        assert!(p.divisible_by_one_minus_q(4));
        assert!(!p.divisible_by_one_minus_q(6));
        assert_eq!(p.div_one_minus_q(4), Poly::monomial(1, 3, r(2)));
    }

    #[test]
    fn one_minus_q4_over_one_minus_q2() {
        let p = Poly::one().mul_one_minus(0, 4);
        let q = p.div_one_minus_q(2);
        let mut expect = Poly::one();
        expect.add_term((0, 2), r(1));
        assert_eq!(q, expect);
    }
}
