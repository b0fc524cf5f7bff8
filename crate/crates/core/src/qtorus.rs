//! The quantum torus generated by `z` and `E = q^{z d/dz}`, extended by
//! polynomials in the Euler operator `D = z d/dz`.
//!
//! Every operator is stored in the normal order `z^m E^n c(D)`, with the
//! commutation rules `E z = q z E` and `D z = z (D + 1)`. The product of two
//! atoms is
//!
//! ```text
//! (z^a E^b c1(D)) (z^m E^n c2(D)) = q^{b m} z^{a+m} E^{b+n} c1(D+m) c2(D)
//! ```
//!
//! which restricts to `z^a q^{b zd} * z^m q^{n zd} = q^{bm} z^{a+m} q^{(b+n)zd}`
//! on constant `c`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::coeff::Scalar;
use crate::laurent::ZSeries;

/// Polynomial in `D` with Scalar coefficients, lowest degree first.
#[derive(Clone, Debug, Default)]
pub struct DPoly {
    coeffs: Vec<Scalar>,
}

impl DPoly {
    pub fn zero() -> DPoly {
        DPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> DPoly {
        DPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> DPoly {
        let mut p = DPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.coeffs.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, k: i64) -> Scalar {
        // Horner in an integer argument.
        let mut acc = Scalar::zero();
        let kk = BigRational::from_integer(k.into());
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale_rational(&kk) + c;
        }
        acc
    }

    /// `c(D + m)` via binomial re-expansion.
    pub fn shifted(&self, m: i64) -> DPoly {
        if m == 0 || self.coeffs.len() <= 1 {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut out = vec![Scalar::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            // (D+m)^i = sum_j binom(i,j) m^{i-j} D^j
            let mut binom = BigInt::one();
            for j in 0..=i {
                if j > 0 {
                    binom = binom * BigInt::from(i - j + 1) / BigInt::from(j);
                }
                let w = BigRational::from_integer(&binom * num_traits::pow(BigInt::from(m), i - j));
                out[j] = &out[j] + &c.scale_rational(&w);
            }
        }
        DPoly::from_coeffs(out)
    }

    pub fn add(&self, other: &DPoly) -> DPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Scalar::zero();
        DPoly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &DPoly) -> DPoly {
        if self.is_zero() || other.is_zero() {
            return DPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        DPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Scalar) -> DPoly {
        DPoly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> DPoly {
        DPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl PartialEq for DPoly {
    fn eq(&self, other: &DPoly) -> bool {
        self.coeffs.len() == other.coeffs.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

/// A finite sum of normal-ordered atoms `z^m E^n c(D)`, keyed by `(m, n)`.
#[derive(Clone, Debug, Default)]
pub struct TorusOp {
    atoms: BTreeMap<(i64, i64), DPoly>,
}

impl TorusOp {
    pub fn zero() -> TorusOp {
        TorusOp::default()
    }

    pub fn identity() -> TorusOp {
        TorusOp::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> TorusOp {
        TorusOp::atom(c, 0, 0)
    }

    /// `c z^m E^n`.
    pub fn atom(c: Scalar, m: i64, n: i64) -> TorusOp {
        TorusOp::atom_d(DPoly::constant(c), m, n)
    }

    /// `z^m E^n c(D)`.
    pub fn atom_d(c: DPoly, m: i64, n: i64) -> TorusOp {
        let mut op = TorusOp::zero();
        op.insert((m, n), c);
        op
    }

    /// The Euler operator `D = z d/dz`.
    pub fn euler() -> TorusOp {
        TorusOp::atom_d(DPoly::from_coeffs(vec![Scalar::zero(), Scalar::one()]), 0, 0)
    }

    pub fn z_pow(m: i64) -> TorusOp {
        TorusOp::atom(Scalar::one(), m, 0)
    }

    pub fn e_pow(n: i64) -> TorusOp {
        TorusOp::atom(Scalar::one(), 0, n)
    }

    fn insert(&mut self, key: (i64, i64), c: DPoly) {
        let merged = match self.atoms.remove(&key) {
            Some(cur) => cur.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.atoms.insert(key, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = ((i64, i64), &DPoly)> {
        self.atoms.iter().map(|(k, v)| (*k, v))
    }

    pub fn max_z_shift(&self) -> Option<i64> {
        self.atoms.keys().map(|k| k.0).max()
    }

    pub fn add(&self, other: &TorusOp) -> TorusOp {
        let mut out = self.clone();
        for (k, c) in &other.atoms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TorusOp) -> TorusOp {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> TorusOp {
        let mut out = TorusOp::zero();
        for (k, v) in &self.atoms {
            out.insert(*k, v.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &TorusOp) -> TorusOp {
        let mut out = TorusOp::zero();
        for (&(m1, n1), c1) in &self.atoms {
            for (&(m2, n2), c2) in &other.atoms {
                let c = c1.shifted(m2).mul(c2).scale(&Scalar::q_pow(n1 * m2));
                out.insert((m1 + m2, n1 + n2), c);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> TorusOp {
        let mut out = TorusOp::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn commutator(&self, other: &TorusOp) -> TorusOp {
        self.mul(other).sub(&other.mul(self))
    }

    /// Action on a series: `z^m E^n c(D) z^k = c(k) q^{nk} z^{k+m}`.
    /// The reliable window of the result ends at `-tail_order + max m`.
    pub fn apply(&self, f: &ZSeries) -> ZSeries {
        let Some(max_m) = self.max_z_shift() else {
            return ZSeries::zero(f.tail_order());
        };
        let tail = f.tail_order() - max_m;
        let mut acc: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (k, fk) in f.iter() {
            for (&(m, n), c) in &self.atoms {
                let e = k + m;
                if e < -tail {
                    continue;
                }
                let w = match c.as_constant() {
                    Some(c0) => c0,
                    None => c.eval(k),
                };
                if w.is_zero() {
                    continue;
                }
                let term = (&w * fk).mul_q_half_pow(2 * n * k);
                let slot = acc.entry(e).or_insert_with(Scalar::zero);
                *slot = &*slot + &term;
            }
        }
        ZSeries::from_coefficients(acc, tail)
    }

    /// Conjugation by `z -> -z`: the atom `z^m E^n c(D)` picks up `(-1)^m`.
    pub fn reflect(&self) -> TorusOp {
        let mut out = TorusOp::zero();
        for (&(m, n), c) in &self.atoms {
            let c = if m.rem_euclid(2) == 0 { c.clone() } else { c.scale(&Scalar::from_int(-1)) };
            out.insert((m, n), c);
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> TorusOp {
        let mut out = TorusOp::zero();
        for (k, c) in &self.atoms {
            out.insert(*k, c.map(&f));
        }
        out
    }

    /// Substitute `T := value` in every coefficient.
    pub fn subs_t(&self, value: &BigRational) -> TorusOp {
        self.map_coefficients(|c| c.subs_t(value))
    }

    pub fn is_pure_torus(&self) -> bool {
        self.atoms.values().all(|c| c.degree().unwrap_or(0) == 0)
    }
}

impl PartialEq for TorusOp {
    fn eq(&self, other: &TorusOp) -> bool {
        self.sub(other).is_zero()
    }
}

fn needs_parens(c: &Scalar) -> bool {
    let s = c.to_string();
    s.contains(" + ") || s.contains(" - ")
}

fn fmt_pow(base: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        e => format!("{base}^{e}"),
    }
}

/// Renders e.g. `1 - E^-1 - q^(1/2) z^-1 E^-2`.
impl fmt::Display for TorusOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Highest z power first, then highest E power.
        for (&(m, n), c) in self.atoms.iter().rev() {
            for (d, coeff) in c.coeffs().iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut symbols: Vec<String> = Vec::new();
                for s in [fmt_pow("z", m), fmt_pow("E", n), fmt_pow("D", d as i64)] {
                    if !s.is_empty() {
                        symbols.push(s);
                    }
                }
                let text = coeff.to_string();
                let (neg, body) = match text.strip_prefix('-') {
                    Some(rest) if !needs_parens(coeff) => (true, rest.to_string()),
                    _ => (false, text.clone()),
                };
                let lead = if first {
                    if neg { "-" } else { "" }
                } else if neg {
                    " - "
                } else {
                    " + "
                };
                let body = if needs_parens(coeff) { format!("({body})") } else { body };
                let body = if body == "1" && !symbols.is_empty() { String::new() } else { body };
                let mut parts = Vec::new();
                if !body.is_empty() {
                    parts.push(body);
                }
                parts.extend(symbols);
                write!(f, "{lead}{}", parts.join(" "))?;
                first = false;
            }
        }
        Ok(())
    }
}

/// `1 - q^{-1}`, the prefactor in every Kac-Schwarz commutator.
pub fn one_minus_q_inv() -> Scalar {
    &Scalar::one() - &Scalar::q_pow(-1)
}

impl TorusOp {
    /// Zero test that ignores empty D-polynomials.
    pub fn is_identically_zero(&self) -> bool {
        self.atoms.values().all(|c| c.coeffs().iter().all(Scalar::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ze() -> TorusOp {
        TorusOp::atom(Scalar::one(), 1, 1)
    }

    #[test]
    fn product_rule_on_generators() {
        let p = ze().mul(&ze());
        assert_eq!(p, TorusOp::atom(Scalar::q_pow(1), 2, 2));
    }

    #[test]
    fn identity_is_neutral() {
        let a = ze().add(&TorusOp::euler());
        assert_eq!(TorusOp::identity().mul(&a), a);
        assert_eq!(a.mul(&TorusOp::identity()), a);
    }

    #[test]
    fn e_z_commutator() {
        let c = TorusOp::e_pow(1).commutator(&TorusOp::z_pow(1));
        let expect = TorusOp::atom(&Scalar::q_pow(1) - &Scalar::one(), 1, 1);
        assert_eq!(c, expect);
    }

    #[test]
    fn euler_eigenvalues() {
        let f = ZSeries::monomial(3, Scalar::one(), 5);
        let g = TorusOp::euler().apply(&f);
        assert_eq!(g.coeff(3), Scalar::from_int(3));
    }

    #[test]
    fn e_inverse_on_negative_power() {
        let f = ZSeries::monomial(-2, Scalar::one(), 5);
        let g = TorusOp::e_pow(-1).apply(&f);
        assert_eq!(g.coeff(-2), Scalar::q_pow(2));
    }

    #[test]
    fn shifted_dpoly() {
        // (D+2)^2 = D^2 + 4D + 4
        let d2 = DPoly::from_coeffs(vec![Scalar::zero(), Scalar::zero(), Scalar::one()]);
        let s = d2.shifted(2);
        assert_eq!(s, DPoly::from_coeffs(vec![Scalar::from_int(4), Scalar::from_int(4), Scalar::one()]));
    }

    #[test]
    fn euler_commutes_past_z() {
        // D z = z (D + 1)
        let lhs = TorusOp::euler().mul(&TorusOp::z_pow(1));
        let rhs = TorusOp::z_pow(1).mul(&TorusOp::euler().add(&TorusOp::identity()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_grammar() {
        let op = TorusOp::identity()
            .sub(&TorusOp::e_pow(-1))
            .sub(&TorusOp::atom(Scalar::q_half_pow(1), -1, -2));
        assert_eq!(op.to_string(), "1 - E^-1 - q^(1/2) z^-1 E^-2");
    }
}
