//! Charge-0 semi-infinite wedges and the regularized action of differential
//! operators `z^l d^m/dz^m`.
//!
//! The state `|lambda>` is `z^{k_1} ^ z^{k_2} ^ ...` with `k_i = i - 1 - lambda_i`;
//! the vacuum is `z^0 ^ z^1 ^ z^2 ^ ...`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::boson::{self, Partition, PPoly, WKind};
use crate::coeff::Scalar;
use crate::kacschwarz::CheckReport;

/// Finite combination of wedge states.
pub type FockVec = BTreeMap<Partition, Scalar>;

pub fn basis_state(lambda: &Partition) -> FockVec {
    let mut v = FockVec::new();
    v.insert(lambda.clone(), Scalar::one());
    v
}

fn add_into(v: &mut FockVec, lambda: Partition, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let cur = v.remove(&lambda).unwrap_or_else(Scalar::zero);
    let s = &cur + &c;
    if !s.is_zero() {
        v.insert(lambda, s);
    }
}

/// Which vacuum value the diagonal (`l = m`) action subtracts in slot `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularization {
    /// `m! binom(i-1, m)`: slot `i` of the vacuum carries `z^{i-1}`.
    VacuumSlot,
    /// `m! binom(i, m)`, matching a vacuum `z^1 ^ z^2 ^ ...`.
    Literal,
}

impl Regularization {
    pub fn subtraction(self, slot: i64, m: u32) -> BigRational {
        match self {
            Regularization::VacuumSlot => falling(slot - 1, m),
            Regularization::Literal => falling(slot, m),
        }
    }
}

/// `k (k-1) ... (k-m+1)`.
pub fn falling(k: i64, m: u32) -> BigRational {
    let mut acc = BigInt::one();
    for j in 0..i64::from(m) {
        acc *= BigInt::from(k - j);
    }
    BigRational::from_integer(acc)
}

fn exponents(lambda: &Partition, n: usize) -> Vec<i64> {
    (1..=n).map(|i| i as i64 - 1 - lambda.part(i) as i64).collect()
}

/// Sort exponents with sign; `None` on a repeated exponent.
fn canonical(mut e: Vec<i64>) -> Option<(i64, Partition)> {
    let mut sign = 1;
    for i in 1..e.len() {
        let mut j = i;
        while j > 0 && e[j - 1] > e[j] {
            e.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if e.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let parts: Vec<usize> = e
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let p = i as i64 - k;
            assert!(p >= 0, "charge changed");
            p as usize
        })
        .collect();
    Some((sign, Partition::new(parts)))
}

/// `(z^l d^m/dz^m)^` on `v`, dropping states with `|lambda| > grade_max`.
pub fn hat_apply(l: i64, m: u32, v: &FockVec, grade_max: usize) -> FockVec {
    hat_apply_with(l, m, v, grade_max, Regularization::VacuumSlot)
}

pub fn hat_apply_with(l: i64, m: u32, v: &FockVec, grade_max: usize, reg: Regularization) -> FockVec {
    let s = l - i64::from(m);
    let mut out = FockVec::new();
    for (lambda, c) in v {
        let n = lambda.len() + s.unsigned_abs() as usize + 1;
        let ks = exponents(lambda, n);
        for i in 0..n {
            let mut w = falling(ks[i], m);
            if s == 0 {
                w -= reg.subtraction(i as i64 + 1, m);
            }
            if w.is_zero() {
                continue;
            }
            let e = ks[i] + s;
            if e >= n as i64 || (s != 0 && ks.contains(&e)) {
                continue;
            }
            let mut next = ks.clone();
            next[i] = e;
            if let Some((sign, mu)) = canonical(next) {
                if mu.size() <= grade_max {
                    add_into(&mut out, mu, c.scale_rational(&(w * BigRational::from_integer(sign.into()))));
                }
            }
        }
    }
    out
}

/// Finite sum of atoms `c z^l d^m/dz^m`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffOp {
    atoms: BTreeMap<(i64, u32), BigRational>,
}

/// Stirling numbers of the second kind `S(k, j)`, `k <= n`.
fn stirling2(n: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); n + 1]; n + 1];
    s[0][0] = BigInt::one();
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = BigInt::from(j) * &s[k - 1][j] + &s[k - 1][j - 1];
        }
    }
    s
}

impl DiffOp {
    pub fn atom(l: i64, m: u32, c: BigRational) -> DiffOp {
        let mut d = DiffOp::default();
        d.add(l, m, c);
        d
    }

    fn add(&mut self, l: i64, m: u32, c: BigRational) {
        let v = self.atoms.remove(&(l, m)).unwrap_or_else(BigRational::zero) + c;
        if !v.is_zero() {
            self.atoms.insert((l, m), v);
        }
    }

    /// `z^shift c(D)` with `D = z d/dz` and `c` given lowest degree first,
    /// expanded through `D^k = sum_j S(k, j) z^j d^j`.
    pub fn z_times_poly_d(shift: i64, c: &[BigRational]) -> DiffOp {
        let s = stirling2(c.len());
        let mut out = DiffOp::default();
        for (k, ck) in c.iter().enumerate() {
            for j in 0..=k {
                if s[k][j].is_zero() {
                    continue;
                }
                out.add(shift + j as i64, j as u32, ck * BigRational::from_integer(s[k][j].clone()));
            }
        }
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = ((i64, u32), &BigRational)> {
        self.atoms.iter().map(|(k, v)| (*k, v))
    }

    pub fn hat(&self, v: &FockVec, grade_max: usize) -> FockVec {
        let mut out = FockVec::new();
        for (&(l, m), c) in &self.atoms {
            for (mu, x) in hat_apply(l, m, v, grade_max) {
                add_into(&mut out, mu, x.scale_rational(c));
            }
        }
        out
    }
}

/// `<0| exp(sum p_n alpha_n / n) |v>`.
pub fn bf_correspond(v: &FockVec, d_max: usize) -> PPoly<Scalar> {
    let mut out = PPoly::zero();
    for (lambda, c) in v {
        let d = lambda.size();
        if d > d_max {
            continue;
        }
        for mu in Partition::all(d) {
            let mut cur = basis_state(lambda);
            for &part in mu.parts() {
                cur = hat_apply(part as i64, 0, &cur, d);
            }
            let Some(vac) = cur.get(&Partition::empty()) else { continue };
            let w = BigRational::new(BigInt::one(), mu.z());
            out.add_term(mu.clone(), (vac * c).scale_rational(&w));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpSpec {
    Alpha(i64),
    L(i64),
    K(i64),
    K0,
}

impl std::fmt::Display for OpSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OpSpec::Alpha(m) => write!(f, "alpha({m})"),
            OpSpec::L(m) => write!(f, "L({m})"),
            OpSpec::K(m) => write!(f, "K({m})"),
            OpSpec::K0 => write!(f, "K0"),
        }
    }
}

/// How the differential symbols of `L_m`, `K_m` are read against the vacuum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolConvention {
    /// Symbols conjugated by `z`, i.e. `D -> D + 1`, to match `z^0 ^ z^1 ^ ...`.
    Transported,
    /// Symbols exactly as displayed.
    Literal,
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Compose `c(D)` with `D -> D + 1`.
fn shift_poly(c: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); c.len()];
    for (k, ck) in c.iter().enumerate() {
        let mut binom = BigInt::one();
        for j in 0..=k {
            if j > 0 {
                binom = binom * BigInt::from(k - j + 1) / BigInt::from(j);
            }
            out[j] += ck * BigRational::from_integer(binom.clone());
        }
    }
    out
}

/// The differential operator whose hat realizes `op`.
pub fn symbol(op: OpSpec, conv: SymbolConvention) -> DiffOp {
    let (shift, poly) = match op {
        OpSpec::Alpha(m) => return DiffOp::atom(m, 0, BigRational::one()),
        // -(z^m (D + (m-1)/2))
        OpSpec::L(m) => (m, vec![r(-(m - 1), 2), r(-1, 1)]),
        // z^m (D^2/2 + (m-1)/2 D + (m-1)(m-2)/12)
        OpSpec::K(m) => (m, vec![r((m - 1) * (m - 2), 12), r(m - 1, 2), r(1, 2)]),
        // (D - 1/2)^2 / 2
        OpSpec::K0 => (0, vec![r(1, 8), r(-1, 2), r(1, 2)]),
    };
    let poly = match conv {
        SymbolConvention::Transported => shift_poly(&poly),
        SymbolConvention::Literal => poly,
    };
    DiffOp::z_times_poly_d(shift, &poly)
}

fn boson_apply(op: OpSpec, f: &PPoly<Scalar>, grade_max: usize) -> PPoly<Scalar> {
    match op {
        OpSpec::Alpha(m) => boson::alpha_apply(m, f).expect("nonzero mode").truncate_grade(grade_max),
        OpSpec::L(m) => boson::virasoro_w_apply(WKind::L(m), f, grade_max),
        OpSpec::K(m) => boson::virasoro_w_apply(WKind::K(m), f, grade_max),
        OpSpec::K0 => boson::cut_join_apply(f).truncate_grade(grade_max),
    }
}

/// `bf(hat(op) |lambda>) = op(bf |lambda>)` for every `|lambda| <= d_max`.
pub fn cross_check_operator(op: OpSpec, d_max: usize) -> CheckReport {
    cross_check_with(op, d_max, SymbolConvention::Transported)
}

pub fn cross_check_with(op: OpSpec, d_max: usize, conv: SymbolConvention) -> CheckReport {
    let mut report = CheckReport::new("bf_operator", op).param("dmax", d_max as i64);
    if conv == SymbolConvention::Literal {
        report.note("symbols read without the D -> D + 1 transport");
    }
    let sym = symbol(op, conv);
    for lambda in Partition::up_to(d_max) {
        let state = basis_state(&lambda);
        let lhs = bf_correspond(&sym.hat(&state, d_max), d_max);
        let rhs = boson_apply(op, &bf_correspond(&state, d_max), d_max);
        let diff = lhs.sub(&rhs);
        let first = diff.terms().next().map(|(mu, c)| (mu.clone(), c.clone()));
        if let Some((mu, c)) = first {
            report.fail_with(format!("{op} on {lambda} at p{mu}"), c);
        }
    }
    report
}

/// `bf |lambda> = s_lambda` for `|lambda| <= d_max`.
pub fn check_bf_schur(d_max: usize) -> CheckReport {
    let mut report = CheckReport::new("bf_schur", "-").param("dmax", d_max as i64);
    for lambda in Partition::up_to(d_max) {
        let diff = bf_correspond(&basis_state(&lambda), d_max).sub(&boson::schur_poly(&lambda));
        let first = diff.terms().next().map(|(mu, c)| (mu.clone(), c.clone()));
        if let Some((mu, c)) = first {
            report.fail_with(format!("{lambda} at p{mu}"), c);
        }
    }
    report
}

/// Fermionic `K_0` is diagonal with the bosonic cut-and-join eigenvalues.
pub fn check_k0_eigenvalues(d_max: usize) -> CheckReport {
    let mut report = CheckReport::new("k0_eigenvalues", "-").param("dmax", d_max as i64);
    let sym = symbol(OpSpec::K0, SymbolConvention::Transported);
    for lambda in Partition::up_to(d_max) {
        let out = sym.hat(&basis_state(&lambda), d_max);
        let expect = match boson::cut_join_eigenvalue(&lambda) {
            Ok(c) => c,
            Err(e) => {
                report.fail_with(lambda.to_string(), e);
                continue;
            }
        };
        let mut want = FockVec::new();
        add_into(&mut want, lambda.clone(), expect);
        if out != want {
            report.fail_with(lambda.to_string(), format!("{out:?}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn vacuum() -> FockVec {
        basis_state(&Partition::empty())
    }

    #[test]
    fn creation_on_vacuum() {
        let out = hat_apply(-1, 0, &vacuum(), 5);
        assert_eq!(out, basis_state(&pp(&[1])));
    }

    #[test]
    fn identity_hat_is_zero() {
        for lam in Partition::up_to(4) {
            assert!(hat_apply(0, 0, &basis_state(&lam), 4).is_empty());
        }
    }

    #[test]
    fn euler_eigenvalue_is_minus_size() {
        for lam in Partition::up_to(5) {
            let out = hat_apply(1, 1, &basis_state(&lam), 5);
            let mut expect = FockVec::new();
            add_into(&mut expect, lam.clone(), Scalar::from_int(-(lam.size() as i64)));
            assert_eq!(out, expect, "{lam}");
        }
    }

    #[test]
    fn repeated_exponent_vanishes() {
        // z^{-1} on |(1)>: slot 2 moves z^1 -> z^0, slot 1 would hit z^{-2}.
        let out = hat_apply(-1, 0, &basis_state(&pp(&[1])), 5);
        assert_eq!(out.len(), 2);
        assert!(out.contains_key(&pp(&[2])));
        assert!(out.contains_key(&pp(&[1, 1])));
    }

    #[test]
    fn heisenberg_on_fock() {
        for m in 1..=3i64 {
            for lam in Partition::up_to(4) {
                let v = basis_state(&lam);
                let ab = hat_apply(m, 0, &hat_apply(-m, 0, &v, 8), 8);
                let ba = hat_apply(-m, 0, &hat_apply(m, 0, &v, 8), 8);
                let mut diff = ab;
                for (k, c) in ba {
                    add_into(&mut diff, k, -&c);
                }
                let mut expect = FockVec::new();
                add_into(&mut expect, lam.clone(), Scalar::from_int(m));
                assert_eq!(diff, expect, "m={m} {lam}");
            }
        }
    }

    #[test]
    fn bf_examples() {
        assert_eq!(bf_correspond(&vacuum(), 3), PPoly::one());
        assert_eq!(bf_correspond(&basis_state(&pp(&[1])), 3), PPoly::p(1));
        assert!(check_bf_schur(4).passed());
    }

    #[test]
    fn operator_squares() {
        for op in [OpSpec::Alpha(-2), OpSpec::Alpha(2), OpSpec::L(0), OpSpec::L(1), OpSpec::L(-1), OpSpec::K0] {
            let r = cross_check_operator(op, 4);
            assert!(r.passed(), "{r:?}");
        }
        assert!(check_k0_eigenvalues(4).passed());
    }

    #[test]
    fn literal_symbols_fail_on_this_vacuum() {
        assert!(!cross_check_with(OpSpec::L(1), 3, SymbolConvention::Literal).passed());
        assert!(!cross_check_with(OpSpec::L(-1), 3, SymbolConvention::Literal).passed());
    }

    #[test]
    fn literal_regularization_leaves_tail_slots_nonzero() {
        // Deep vacuum slots must contribute nothing for a finite action.
        for m in 1..=3u32 {
            for slot in 10..15i64 {
                let vac_exp = slot - 1;
                assert!((falling(vac_exp, m) - Regularization::VacuumSlot.subtraction(slot, m)).is_zero());
                assert!(!(falling(vac_exp, m) - Regularization::Literal.subtraction(slot, m)).is_zero());
            }
        }
    }

    #[test]
    fn stirling_expansion_of_euler_square() {
        // D^2 = z^2 d^2 + z d
        let d = DiffOp::z_times_poly_d(0, &[r(0, 1), r(0, 1), r(1, 1)]);
        let atoms: Vec<_> = d.atoms().map(|(k, v)| (k, v.clone())).collect();
        assert_eq!(atoms, vec![((1, 1), r(1, 1)), ((2, 2), r(1, 1))]);
    }
}
