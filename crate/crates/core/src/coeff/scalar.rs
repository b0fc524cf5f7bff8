use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{is_negative_integer, pow_rational, Poly};
use super::CoeffError;

/// A binomial factor `1 - T^t q^k` kept in factored form.
///
/// Denominator factors (negative exponent) are always `T`-free with `k >= 1`.
/// `T`-carrying factors only ever appear in the numerator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub t: bool,
    pub k: i64,
}

impl Factor {
    pub fn one_minus_q(k: i64) -> Factor {
        assert!(k >= 1, "(1 - q^k) requires k >= 1");
        Factor { t: false, k }
    }

    pub fn one_minus_tq(k: i64) -> Factor {
        Factor { t: true, k }
    }

    fn expand_into(&self, p: &Poly, power: u32) -> Poly {
        let mut out = p.clone();
        for _ in 0..power {
            out = out.mul_one_minus(u32::from(self.t), 2 * self.k);
        }
        out
    }
}

/// Exact element of `Q(Q)[T]` localized at the q-integers `1 - q^k`, where
/// `Q = q^{1/2}`.
///
/// The value is `Q^shift * numerator * prod(factor^exponent)`. After every
/// operation the value is normalized: numerators start at `Q^0`, denominator
/// factors are cancelled whenever the numerator is divisible by them, and
/// the zero value has no factors at all.
#[derive(Clone, Debug)]
pub struct Scalar {
    pub(crate) num: Poly,
    pub(crate) shift: i64,
    pub(crate) factors: BTreeMap<Factor, i32>,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { num: Poly::zero(), shift: 0, factors: BTreeMap::new() }
    }

    pub fn one() -> Scalar {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(c: BigRational) -> Scalar {
        Scalar::from_parts(Poly::constant(c), 0, BTreeMap::new())
    }

    /// `Q^e = q^{e/2}`.
    pub fn q_half_pow(e: i64) -> Scalar {
        Scalar::from_parts(Poly::one(), e, BTreeMap::new())
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Scalar {
        Scalar::q_half_pow(2 * k)
    }

    /// `c * T^t * Q^e`.
    pub fn monomial(c: BigRational, t: u32, e: i64) -> Scalar {
        Scalar::from_parts(Poly::monomial(t, 0, c), e, BTreeMap::new())
    }

    pub fn t() -> Scalar {
        Scalar::monomial(BigRational::one(), 1, 0)
    }

    /// `(1 - q^k)`, kept factored.
    pub fn one_minus_q(k: i64) -> Scalar {
        let mut f = BTreeMap::new();
        f.insert(Factor::one_minus_q(k), 1);
        Scalar::from_parts(Poly::one(), 0, f)
    }

    /// `(1 - T q^k)`, kept factored; `k` may be any integer.
    pub fn one_minus_tq(k: i64) -> Scalar {
        let mut f = BTreeMap::new();
        f.insert(Factor::one_minus_tq(k), 1);
        Scalar::from_parts(Poly::one(), 0, f)
    }

    pub(crate) fn from_parts(num: Poly, shift: i64, factors: BTreeMap<Factor, i32>) -> Scalar {
        let mut s = Scalar { num, shift, factors };
        s.normalize_in_place();
        s
    }

    /// Build `c0 + c1 Q + c2 Q^2 + ...` from `(T-exponent, Q-exponent, coefficient)` triples.
    pub fn from_terms<I>(terms: I) -> Scalar
    where
        I: IntoIterator<Item = (u32, i64, BigRational)>,
    {
        let mut p = Poly::zero();
        for (t, e, c) in terms {
            p.add_term((t, e), c);
        }
        Scalar::from_parts(p, 0, BTreeMap::new())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        (self - &Scalar::one()).is_zero()
    }

    /// Returns the value as a rational number if it has no `q` or `T` dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.shift != 0 || !self.factors.is_empty() {
            return None;
        }
        self.num.constant_value()
    }

    pub fn has_t(&self) -> bool {
        self.num.has_t() || self.factors.keys().any(|f| f.t)
    }

    pub fn has_denominator(&self) -> bool {
        self.factors.values().any(|&e| e < 0)
    }

    /// Number of stored numerator terms; a rough size measure.
    pub fn weight(&self) -> usize {
        self.num.len() + self.factors.len()
    }

    /// Re-establish canonical form. Idempotent.
    pub fn normalize(&self) -> Scalar {
        let mut s = self.clone();
        s.normalize_in_place();
        s
    }

    fn normalize_in_place(&mut self) {
        if self.num.is_zero() {
            self.shift = 0;
            self.factors.clear();
            return;
        }
        self.factors.retain(|_, e| *e != 0);

        // Repeat while a partner cancellation changed the numerator.
        while self.cancel_pass() {}
        self.factors.retain(|_, e| *e != 0);

        if let Some(m) = self.num.min_q() {
            if m != 0 {
                self.num = self.num.shift_q(-m);
                self.shift += m;
            }
        }
    }

    fn cancel_pass(&mut self) -> bool {
        let mut again = false;
        // Denominator factor (1-q^k) against numerator factor (1-q^{k'}) with k | k'.
        let dens: Vec<Factor> = self
            .factors
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(f, _)| *f)
            .collect();
        for d in &dens {
            loop {
                let de = *self.factors.get(d).unwrap_or(&0);
                if de >= 0 {
                    break;
                }
                let partner = self
                    .factors
                    .iter()
                    .find(|(f, &e)| e > 0 && !f.t && f.k % d.k == 0)
                    .map(|(f, _)| *f);
                let Some(p) = partner else { break };
                *self.factors.get_mut(&p).unwrap() -= 1;
                *self.factors.get_mut(d).unwrap() += 1;
                // (1-q^{k'})/(1-q^k) = 1 + q^k + ... + q^{k'-k}
                let mut cyc = Poly::zero();
                let mut e = 0;
                while e < p.k {
                    cyc.add_term((0, 2 * e), BigRational::one());
                    e += d.k;
                }
                self.num = self.num.mul(&cyc);
                again |= p.k != d.k;
            }
            // Denominator factor against the expanded numerator.
            loop {
                let de = *self.factors.get(d).unwrap_or(&0);
                if de >= 0 || !self.num.divisible_by_one_minus_q(2 * d.k) {
                    break;
                }
                self.num = self.num.div_one_minus_q(2 * d.k);
                *self.factors.get_mut(d).unwrap() += 1;
            }
        }
        again
    }

    /// Expand every positive-exponent factor into the numerator polynomial.
    fn expanded_numerator(&self) -> (Poly, BTreeMap<Factor, i32>) {
        let mut p = self.num.clone();
        let mut dens = BTreeMap::new();
        for (f, &e) in &self.factors {
            if e > 0 {
                p = f.expand_into(&p, e as u32);
            } else {
                dens.insert(*f, e);
            }
        }
        (p, dens)
    }

    /// Same value with every numerator factor multiplied out, leaving only the
    /// `(1-q^k)` denominators factored.
    pub fn expanded(&self) -> Scalar {
        let (p, dens) = self.expanded_numerator();
        Scalar::from_parts(p.shift_q(self.shift), 0, dens)
    }

    fn add_impl(&self, other: &Scalar, negate: bool) -> Scalar {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other } else { other.clone() };
        }
        let mut common: BTreeMap<Factor, i32> = BTreeMap::new();
        for f in self.factors.keys().chain(other.factors.keys()) {
            let a = *self.factors.get(f).unwrap_or(&0);
            let b = *other.factors.get(f).unwrap_or(&0);
            let m = a.min(b);
            if m != 0 {
                common.insert(*f, m);
            }
        }
        let shift = self.shift.min(other.shift);
        let lift = |s: &Scalar| -> Poly {
            let mut p = s.num.shift_q(s.shift - shift);
            let keys: std::collections::BTreeSet<&Factor> = s.factors.keys().chain(common.keys()).collect();
            for f in keys {
                let e = s.factors.get(f).copied().unwrap_or(0);
                let rest = e - common.get(f).copied().unwrap_or(0);
                if rest > 0 {
                    p = f.expand_into(&p, rest as u32);
                }
            }
            p
        };
        let mut p = lift(self);
        let q = lift(other);
        if negate {
            p.sub_assign(&q);
        } else {
            p.add_assign(&q);
        }
        Scalar::from_parts(p, shift, common)
    }

    pub fn mul_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            *factors.entry(*f).or_insert(0) += e;
        }
        Scalar::from_parts(self.num.mul(&other.num), self.shift + other.shift, factors)
    }

    /// Multiply by `Q^e` without touching the rest of the representation.
    pub fn mul_q_half_pow(&self, e: i64) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let mut s = self.clone();
        s.shift += e;
        s
    }

    pub fn scale_rational(&self, c: &BigRational) -> Scalar {
        if c.is_zero() || self.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(c), shift: self.shift, factors: self.factors.clone() }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..n {
            out = out.mul_ref(self);
        }
        out
    }

    /// Multiplicative inverse. Only values whose expanded numerator factors
    /// into a rational constant, a power of `Q` and `(1-q^k)` binomials are
    /// invertible inside this field representation.
    pub fn inverse(&self) -> Result<Scalar, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if self.factors.iter().any(|(f, &e)| f.t && e > 0) || self.num.has_t() {
            return Err(CoeffError::NotInvertible(self.to_string()));
        }
        let mut p = self.num.clone();
        let (_, c0) = p.lowest_coefficient().map(|(k, c)| (*k, c.clone())).unwrap();
        p = p.scale(&c0.recip());
        let mut found: BTreeMap<Factor, i32> = BTreeMap::new();
        while p != Poly::one() {
            let (&(_, e), c) = p
                .terms
                .iter()
                .find(|(&(_, e), _)| e > 0)
                .ok_or_else(|| CoeffError::NotInvertible(self.to_string()))?;
            if e % 2 != 0 || is_negative_integer(c).is_none() {
                return Err(CoeffError::NotInvertible(self.to_string()));
            }
            if !p.divisible_by_one_minus_q(e) {
                return Err(CoeffError::NotInvertible(self.to_string()));
            }
            p = p.div_one_minus_q(e);
            *found.entry(Factor::one_minus_q(e / 2)).or_insert(0) += 1;
        }
        let mut factors: BTreeMap<Factor, i32> = self.factors.iter().map(|(f, e)| (*f, -e)).collect();
        for (f, e) in found {
            *factors.entry(f).or_insert(0) -= e;
        }
        Ok(Scalar::from_parts(Poly::constant(c0.recip()), -self.shift, factors))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, CoeffError> {
        Ok(self.mul_ref(&other.inverse()?))
    }

    /// Substitute `T := value`.
    pub fn subs_t(&self, value: &BigRational) -> Scalar {
        let mut p = self.num.subs_t(value);
        let mut factors = BTreeMap::new();
        for (f, &e) in &self.factors {
            if f.t {
                // e > 0 by invariant
                let mut b = Poly::one();
                b.add_term((0, 2 * f.k), -value.clone());
                for _ in 0..e {
                    p = p.mul(&b);
                }
            } else {
                factors.insert(*f, e);
            }
        }
        Scalar::from_parts(p, self.shift, factors)
    }

    /// Substitute `Q := value` (so `q := value^2`). Fails when a denominator vanishes.
    pub fn subs_q(&self, value: &BigRational) -> Result<Scalar, CoeffError> {
        if value.is_zero() && (self.shift < 0 || self.num.min_q().unwrap_or(0) < 0) {
            return Err(CoeffError::DivisionByZero);
        }
        let mut p = self.num.subs_q(value);
        for (f, &e) in &self.factors {
            let mut b = Poly::one();
            let qk = pow_rational(value, 2 * f.k);
            b.add_term((u32::from(f.t), 0), -qk);
            if e > 0 {
                for _ in 0..e {
                    p = p.mul(&b);
                }
            } else {
                let c = b.constant_value().ok_or(CoeffError::DivisionByZero)?;
                if c.is_zero() {
                    return Err(CoeffError::DivisionByZero);
                }
                p = p.scale(&pow_rational(&c, e as i64));
            }
        }
        if self.shift != 0 {
            p = p.scale(&pow_rational(value, self.shift));
        }
        Ok(Scalar::from_parts(p, 0, BTreeMap::new()))
    }

    /// Laurent coefficients in `Q` for a value without denominators or `T`.
    pub fn laurent_coefficients(&self) -> Option<BTreeMap<i64, BigRational>> {
        if self.has_t() || self.has_denominator() {
            return None;
        }
        let (p, _) = self.expanded_numerator();
        Some(p.terms.into_iter().map(|((_, e), c)| (e + self.shift, c)).collect())
    }

    /// Expanded numerator terms `(T-exponent, Q-exponent, coefficient)` with the
    /// monomial prefactor folded in, and the denominator factors `(k, multiplicity)`.
    pub fn expanded_parts(&self) -> (Vec<(u32, i64, BigRational)>, Vec<(i64, u32)>) {
        let (p, dens) = self.expanded_numerator();
        let terms = p.terms.into_iter().map(|((t, e), c)| (t, e + self.shift, c)).collect();
        let dens = dens.into_iter().map(|(f, e)| (f.k, (-e) as u32)).collect();
        (terms, dens)
    }

    pub(crate) fn render(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<(u32, i64, BigRational)> = self
            .num
            .terms
            .iter()
            .map(|(&(t, e), c)| (t, e + self.shift, c.clone()))
            .collect();
        let nums: Vec<(Factor, i32)> =
            self.factors.iter().filter(|(_, &e)| e > 0).map(|(f, e)| (*f, *e)).collect();
        let dens: Vec<(Factor, i32)> =
            self.factors.iter().filter(|(_, &e)| e < 0).map(|(f, e)| (*f, -e)).collect();
        let wrap = terms.len() > 1 && (!nums.is_empty() || !dens.is_empty());
        if wrap {
            write!(f, "(")?;
        }
        let unit = terms.len() == 1 && terms[0].0 == 0 && terms[0].1 == 0 && terms[0].2.abs().is_one();
        if unit && !nums.is_empty() {
            if terms[0].2.is_negative() {
                write!(f, "-")?;
            }
        } else {
            for (i, (t, e, c)) in terms.iter().enumerate() {
                render_term(f, *t, *e, c, i == 0)?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        for (i, (fac, e)) in nums.iter().enumerate() {
            if i > 0 || !unit {
                write!(f, "*")?;
            }
            render_factor(f, fac, *e)?;
        }
        if !dens.is_empty() {
            write!(f, "/")?;
            if dens.len() > 1 || dens[0].1 > 1 {
                write!(f, "(")?;
            }
            for (i, (fac, e)) in dens.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                render_factor(f, fac, *e)?;
            }
            if dens.len() > 1 || dens[0].1 > 1 {
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

fn render_q(e: i64) -> String {
    if e % 2 == 0 {
        match e / 2 {
            1 => "q".to_string(),
            k if k < 0 => format!("q^{k}"),
            k => format!("q^{k}"),
        }
    } else {
        format!("q^({e}/2)")
    }
}

fn render_term(f: &mut fmt::Formatter<'_>, t: u32, e: i64, c: &BigRational, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let mut parts: Vec<String> = Vec::new();
    if !a.is_one() || (t == 0 && e == 0) {
        parts.push(a.to_string());
    }
    if e != 0 {
        parts.push(render_q(e));
    }
    match t {
        0 => {}
        1 => parts.push("T".into()),
        _ => parts.push(format!("T^{t}")),
    }
    write!(f, "{}", parts.join("*"))
}

fn render_factor(f: &mut fmt::Formatter<'_>, fac: &Factor, e: i32) -> fmt::Result {
    let inner = match (fac.t, fac.k) {
        (false, k) => format!("1-{}", render_q(2 * k)),
        (true, 0) => "1-T".to_string(),
        (true, k) => format!("1-T*{}", render_q(2 * k)),
    };
    if e == 1 {
        write!(f, "({inner})")
    } else {
        write!(f, "({inner})^{e}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for Scalar {}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(c: BigRational) -> Scalar {
        Scalar::from_rational(c)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.add_impl(rhs, true)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.mul_ref(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), shift: self.shift, factors: self.factors.clone() }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Panics on non-invertible divisors; use [`Scalar::checked_div`] to handle that case.
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self.checked_div(&rhs).expect("non-invertible divisor")
    }
}

/// Small integer helper used by several modules: `(-1)^n`.
pub fn sign_pow(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: i64) -> Scalar {
        Scalar::q_pow(k)
    }

    #[test]
    fn factor_cancellation() {
        let num = Scalar::one() - q(2);
        let res = num.checked_div(&Scalar::one_minus_q(1)).unwrap();
        assert_eq!(res, Scalar::one() + q(1));
        assert!(!res.has_denominator());
    }

    #[test]
    fn half_powers_multiply_to_q() {
        let h = Scalar::q_half_pow(1);
        let prod = &h * &h;
        assert_eq!(prod, q(1));
        assert_eq!(prod.shift, 2);
    }

    #[test]
    fn like_denominators_add() {
        let a = Scalar::one_minus_q(1).inverse().unwrap();
        let s = &a + &a;
        assert_eq!(s.to_string(), "2/(1-q)");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn non_factorable_divisor_is_rejected() {
        let d = Scalar::one() + q(1) + q(2) + q(3) + Scalar::from_int(5);
        assert!(matches!(Scalar::one().checked_div(&d), Err(CoeffError::NotInvertible(_))));
    }

    #[test]
    fn t_factors_expand_on_substitution() {
        let s = Scalar::one_minus_tq(0).mul_ref(&Scalar::one_minus_tq(1));
        assert!(s.subs_t(&BigRational::one()).is_zero());
        let at0 = s.subs_t(&BigRational::zero());
        assert!(at0.is_one());
    }

    #[test]
    fn expanded_form_is_representation_independent() {
        let a = Scalar::one_minus_tq(2);
        let b = Scalar::one() - Scalar::t().mul_ref(&q(2));
        assert_eq!(a, b);
        assert_eq!(a.expanded().to_string(), b.expanded().to_string());
    }
}
