//! Bosonic Fock space: polynomials in `p_1, p_2, ...`, the modes `alpha_m`,
//! the `W_{1+inf}` generators `L_m`, `K_m`, the cut-and-join operator and
//! Schur polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::coeff::{determinant, factorial, Module, Ring, Scalar};
use crate::kacschwarz::CheckReport;

/// A partition, parts weakly decreasing and positive. Also the index of the
/// monomial `p_mu = p_{mu_1} p_{mu_2} ...`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BosonError {
    #[error("alpha_0 is excluded on the charge-0 sector")]
    ZeroMode,
    #[error("K_0 s_{0} is not proportional to s_{0}")]
    NotEigen(String),
    #[error("coefficient `{0}` is not a Laurent polynomial in u")]
    NotLaurent(String),
    #[error("cannot parse partition `{0}`")]
    Parse(String),
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `lambda_i` with 1-based `i`, zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `z_mu = prod i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (i, m) in self.multiplicities() {
            acc *= num_traits::pow(BigInt::from(i), m) * factorial(m as u64);
        }
        acc
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.part(1);
        Partition((1..=n).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Sum of contents `sum (j - i)` over boxes, the cut-and-join eigenvalue.
    pub fn content_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let (i, p) = (i as i64 + 1, p as i64);
                p * (p - 2 * i + 1) / 2
            })
            .sum()
    }

    fn with(&self, part: usize) -> Partition {
        let mut v = self.0.clone();
        v.push(part);
        Partition::new(v)
    }

    fn without(&self, part: usize) -> Partition {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&p| p == part).expect("part present");
        v.remove(pos);
        Partition(v)
    }

    /// Partitions obtained by adding one box.
    pub fn add_box(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..=self.0.len() {
            let cur = self.0.get(i).copied().unwrap_or(0);
            let above = if i == 0 { usize::MAX } else { self.0[i - 1] };
            if cur < above {
                let mut v = self.0.clone();
                if i == v.len() {
                    v.push(1);
                } else {
                    v[i] += 1;
                }
                out.push(Partition(v));
            }
        }
        out
    }

    /// All partitions of `n`, reverse lexicographic.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=n.min(max)).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions of size at most `n`, ordered by size.
    pub fn up_to(n: usize) -> Vec<Partition> {
        (0..=n).flat_map(Partition::all).collect()
    }

    /// Tableau count via the hook length formula.
    pub fn hook_count(&self) -> BigInt {
        let conj = self.conjugate();
        let mut hooks = BigInt::one();
        for (i, &p) in self.0.iter().enumerate() {
            for j in 0..p {
                let arm = p - j - 1;
                let leg = conj.0[j] - i - 1;
                hooks *= BigInt::from(arm + leg + 1);
            }
        }
        factorial(self.size() as u64) / hooks
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = BosonError;

    fn from_str(s: &str) -> Result<Partition, BosonError> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| BosonError::Parse(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| BosonError::Parse(s.to_string()))?;
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(BosonError::Parse(s.to_string()));
        }
        Ok(Partition(parts))
    }
}

/// Polynomial in the power sums with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct PPoly<C = Scalar> {
    terms: BTreeMap<Partition, C>,
}

impl<C: Module> Default for PPoly<C> {
    fn default() -> Self {
        PPoly { terms: BTreeMap::new() }
    }
}

impl<C: Module> PPoly<C> {
    pub fn zero() -> PPoly<C> {
        PPoly::default()
    }

    pub fn monomial(mu: Partition, c: C) -> PPoly<C> {
        let mut out = PPoly::zero();
        out.add_term(mu, c);
        out
    }

    pub fn add_term(&mut self, mu: Partition, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mu) {
            Some(cur) => {
                let s = cur.add_ref(&c);
                if !s.is_zero() {
                    self.terms.insert(mu, s);
                }
            }
            None => {
                self.terms.insert(mu, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &Partition) -> C {
        self.terms.get(mu).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn max_grade(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    pub fn grade_part(&self, d: usize) -> PPoly<C> {
        PPoly { terms: self.terms.iter().filter(|(k, _)| k.size() == d).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    pub fn truncate_grade(&self, d: usize) -> PPoly<C> {
        PPoly { terms: self.terms.iter().filter(|(k, _)| k.size() <= d).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    pub fn add(&self, other: &PPoly<C>) -> PPoly<C> {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &PPoly<C>) -> PPoly<C> {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.neg_ref());
        }
        out
    }

    pub fn scale_rational(&self, c: &BigRational) -> PPoly<C> {
        let mut out = PPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.scale_rational(c));
        }
        out
    }

    pub fn map_coefficients<D: Module>(&self, f: impl Fn(&C) -> D) -> PPoly<D> {
        let mut out = PPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), f(v));
        }
        out
    }

    /// Rows `partition<TAB>coefficient`, by grade then partition.
    pub fn to_tsv(&self) -> String
    where
        C: fmt::Display,
    {
        let mut keys: Vec<&Partition> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.size().cmp(&b.size()).then(b.cmp(a)));
        keys.iter().map(|k| format!("{k}\t{}\n", self.terms[*k])).collect()
    }
}

impl<C: Ring> PPoly<C> {
    pub fn one() -> PPoly<C> {
        PPoly::monomial(Partition::empty(), C::one())
    }

    pub fn p(n: usize) -> PPoly<C> {
        PPoly::monomial(Partition::new(vec![n]), C::one())
    }

    pub fn scale(&self, c: &C) -> PPoly<C> {
        let mut out = PPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.mul_ref(c));
        }
        out
    }

    pub fn mul(&self, other: &PPoly<C>) -> PPoly<C> {
        let mut out = PPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut v = a.0.clone();
                v.extend_from_slice(&b.0);
                out.add_term(Partition::new(v), ca.mul_ref(cb));
            }
        }
        out
    }
}

impl<C: Ring> Module for PPoly<C> {
    fn zero() -> Self {
        PPoly::zero()
    }
    fn is_zero(&self) -> bool {
        PPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn neg_ref(&self) -> Self {
        self.scale_rational(&BigRational::from_integer((-1).into()))
    }
    fn scale_rational(&self, c: &BigRational) -> Self {
        PPoly::scale_rational(self, c)
    }
}

impl<C: Ring> Ring for PPoly<C> {
    fn one() -> Self {
        PPoly::one()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `alpha_m`: `m d/dp_m` for `m > 0`, multiplication by `p_{-m}` for `m < 0`.
pub fn alpha_apply<C: Module>(m: i64, f: &PPoly<C>) -> Result<PPoly<C>, BosonError> {
    if m == 0 {
        return Err(BosonError::ZeroMode);
    }
    let mut out = PPoly::zero();
    for (mu, c) in f.terms() {
        if m < 0 {
            out.add_term(mu.with((-m) as usize), c.clone());
        } else {
            let k = mu.parts().iter().filter(|&&p| p == m as usize).count() as i64;
            if k > 0 {
                out.add_term(mu.without(m as usize), c.scale_rational(&rat(k * m)));
            }
        }
    }
    Ok(out)
}

/// The cut-and-join operator
/// `K_0 = 1/2 sum_{m,n>=1} ((m+n) p_m p_n d/dp_{m+n} + m n p_{m+n} d^2/dp_m dp_n)`.
pub fn cut_join_apply<C: Module>(f: &PPoly<C>) -> PPoly<C> {
    let half = BigRational::new(1.into(), 2.into());
    let mut out = PPoly::zero();
    for (mu, c) in f.terms() {
        let mult = mu.multiplicities();
        // Cut: d/dp_s then (s/2) sum_{m+n=s} p_m p_n.
        for (&s, &k) in &mult {
            let rest = mu.without(s);
            for m in 1..s {
                let w = &half * rat((s * k) as i64);
                out.add_term(rest.with(m).with(s - m), c.scale_rational(&w));
            }
        }
        // Join: ordered pairs (m, n) of parts.
        for (&m, &km) in &mult {
            for (&n, &kn) in &mult {
                let pairs = if m == n { km * (km - 1) } else { km * kn };
                if pairs == 0 {
                    continue;
                }
                let rest = mu.without(m).without(n);
                let w = &half * rat((m * n * pairs) as i64);
                out.add_term(rest.with(m + n), c.scale_rational(&w));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WKind {
    L(i64),
    K(i64),
}

/// Normal-ordered `L_m = 1/2 sum :alpha_j alpha_k:` or
/// `K_m = 1/6 sum :alpha_j alpha_k alpha_l:`, zero modes excluded.
/// Terms of grade above `grade_max` are dropped.
pub fn virasoro_w_apply<C: Module>(kind: WKind, f: &PPoly<C>, grade_max: usize) -> PPoly<C> {
    let g = f.max_grade().unwrap_or(0).max(grade_max) as i64;
    let (arity, m, weight) = match kind {
        WKind::L(m) => (2, m, BigRational::new(1.into(), 2.into())),
        WKind::K(m) => (3, m, BigRational::new(1.into(), 6.into())),
    };
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..arity {
        tuples = tuples
            .into_iter()
            .flat_map(|t| (-g..=g).filter(|&i| i != 0).map(move |i| [t.clone(), vec![i]].concat()))
            .collect();
    }
    let mut out = PPoly::zero();
    for t in tuples.into_iter().filter(|t| t.iter().sum::<i64>() == m) {
        let mut cur = f.clone();
        // Annihilators act first.
        let mut order = t.clone();
        order.sort_unstable_by(|a, b| b.cmp(a));
        for &i in &order {
            cur = alpha_apply(i, &cur).expect("nonzero mode");
            if cur.is_zero() {
                break;
            }
        }
        out = out.add(&cur.truncate_grade(grade_max).scale_rational(&weight));
    }
    out
}

/// `h_n = sum_{|mu|=n} p_mu / z_mu`.
pub fn complete_homogeneous(n: i64) -> PPoly<Scalar> {
    if n < 0 {
        return PPoly::zero();
    }
    let mut out = PPoly::zero();
    for mu in Partition::all(n as usize) {
        let z = mu.z();
        out.add_term(mu, Scalar::from_rational(BigRational::new(1.into(), z)));
    }
    out
}

/// Jacobi-Trudi: `s_lambda = det h_{lambda_i - i + j}`.
pub fn schur_poly(lambda: &Partition) -> PPoly<Scalar> {
    let n = lambda.len();
    let m: Vec<Vec<PPoly<Scalar>>> = (1..=n)
        .map(|i| (1..=n).map(|j| complete_homogeneous(lambda.part(i) as i64 - i as i64 + j as i64)).collect())
        .collect();
    determinant(&m)
}

/// `c_lambda` with `K_0 s_lambda = c_lambda s_lambda`, read off the action.
pub fn cut_join_eigenvalue(lambda: &Partition) -> Result<Scalar, BosonError> {
    let s = schur_poly(lambda);
    let k = cut_join_apply(&s);
    let Some((mu, c)) = s.terms().next() else {
        return Err(BosonError::NotEigen(lambda.to_string()));
    };
    let ratio = k.coeff(mu).checked_div(c).map_err(|_| BosonError::NotEigen(lambda.to_string()))?;
    if k != s.scale(&ratio) {
        return Err(BosonError::NotEigen(lambda.to_string()));
    }
    Ok(ratio)
}

/// Coefficients `f^lambda` of `p_1^d = sum f^lambda s_lambda`, by adding boxes.
pub fn pieri_p1_power(d: usize) -> BTreeMap<Partition, BigInt> {
    let mut cur: BTreeMap<Partition, BigInt> = BTreeMap::new();
    cur.insert(Partition::empty(), BigInt::one());
    for _ in 0..d {
        let mut next = BTreeMap::new();
        for (lam, c) in &cur {
            for nu in lam.add_box() {
                *next.entry(nu).or_insert_with(BigInt::zero) += c;
            }
        }
        cur = next;
    }
    cur
}

/// `Z = e^{lambda K_0} e^{p_1}` through grade `d_max`, coefficients in `u = Q`.
pub fn hurwitz_tau(d_max: usize) -> PPoly<Scalar> {
    let mut out = PPoly::zero();
    for d in 0..=d_max {
        let inv = BigRational::new(1.into(), factorial(d as u64));
        for (lam, f) in pieri_p1_power(d) {
            let c = Scalar::q_half_pow(2 * lam.content_sum())
                .scale_rational(&(&inv * BigRational::from_integer(f)));
            out = out.add(&schur_poly(&lam).scale(&c));
        }
    }
    out
}

/// A truncated power series in `lambda` with rational coefficients; sparse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaSeries {
    coeffs: BTreeMap<u32, BigRational>,
}

impl LambdaSeries {
    pub fn monomial(b: u32, c: BigRational) -> LambdaSeries {
        let mut s = LambdaSeries::default();
        if !c.is_zero() {
            s.coeffs.insert(b, c);
        }
        s
    }

    pub fn coeff(&self, b: u32) -> BigRational {
        self.coeffs.get(&b).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(b, c)| (*b, c))
    }

    pub fn truncate(&self, b_max: u32) -> LambdaSeries {
        LambdaSeries { coeffs: self.coeffs.range(..=b_max).map(|(b, c)| (*b, c.clone())).collect() }
    }

    /// `d/d lambda`.
    pub fn derivative(&self) -> LambdaSeries {
        LambdaSeries {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(b, _)| **b > 0)
                .map(|(b, c)| (b - 1, c * rat(i64::from(*b))))
                .collect(),
        }
    }
}

impl fmt::Display for LambdaSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(b, c)| format!("{c}*l^{b}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Module for LambdaSeries {
    fn zero() -> Self {
        LambdaSeries::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            let v = out.coeff(*b) + c;
            if v.is_zero() {
                out.coeffs.remove(b);
            } else {
                out.coeffs.insert(*b, v);
            }
        }
        out
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn neg_ref(&self) -> Self {
        LambdaSeries { coeffs: self.coeffs.iter().map(|(b, c)| (*b, -c)).collect() }
    }
    fn scale_rational(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LambdaSeries::default();
        }
        LambdaSeries { coeffs: self.coeffs.iter().map(|(b, v)| (*b, v * c)).collect() }
    }
}

/// `u^k -> sum_{b <= b_max} (k lambda / 2)^b / b!`.
pub fn lambda_expand(f: &PPoly<Scalar>, b_max: u32) -> Result<PPoly<LambdaSeries>, BosonError> {
    let mut out = PPoly::zero();
    for (mu, c) in f.terms() {
        let laurent = c.laurent_coefficients().ok_or_else(|| BosonError::NotLaurent(c.to_string()))?;
        let mut series = LambdaSeries::default();
        for (k, ck) in laurent {
            let half_k = BigRational::new(k.into(), 2.into());
            let mut pw = BigRational::one();
            for b in 0..=b_max {
                if b > 0 {
                    pw = pw * &half_k / rat(i64::from(b));
                }
                series = series.add_ref(&LambdaSeries::monomial(b, &pw * &ck));
            }
        }
        out.add_term(mu.clone(), series);
    }
    Ok(out)
}

/// `sum_{b <= b_max} lambda^b / b! K_0^b (p_1^d / d!)`, the solution of the
/// cut-and-join equation with initial value `p_1^d / d!`.
pub fn cut_join_evolution(d: usize, b_max: u32) -> PPoly<LambdaSeries> {
    let init = Partition::new(vec![1; d]);
    let mut cur = PPoly::monomial(init, Scalar::from_rational(BigRational::new(1.into(), factorial(d as u64))));
    let mut out = PPoly::zero();
    let mut inv_fact = BigRational::one();
    for b in 0..=b_max {
        if b > 0 {
            cur = cut_join_apply(&cur);
            inv_fact /= rat(i64::from(b));
        }
        for (mu, c) in cur.terms() {
            let c = c.as_rational().expect("rational evolution");
            out.add_term(mu.clone(), LambdaSeries::monomial(b, c * &inv_fact));
        }
    }
    out
}

/// `d/d lambda tau = K_0 tau` on every coefficient below `b_max`.
pub fn check_cut_join_equation(tau: &PPoly<LambdaSeries>, b_max: u32) -> CheckReport {
    let mut report = CheckReport::new("cut_join_equation", "hurwitz").param("bmax", i64::from(b_max));
    let lhs = tau.map_coefficients(|c| c.derivative().truncate(b_max - 1));
    let rhs = cut_join_apply(tau).map_coefficients(|c| c.truncate(b_max - 1));
    for (mu, c) in lhs.sub(&rhs).terms() {
        report.fail_with(format!("p{mu}"), c);
    }
    report
}

/// Bivariate power series in `x`, `q` whose coefficients are polynomials in `a`.
#[derive(Clone, Debug, PartialEq)]
struct XqSeries {
    x_max: usize,
    q_max: usize,
    c: Vec<Vec<Vec<BigInt>>>,
}

impl XqSeries {
    fn monomial(x_max: usize, q_max: usize, x: usize) -> XqSeries {
        let mut c = vec![vec![Vec::new(); q_max + 1]; x_max + 1];
        if x <= x_max {
            c[x][0] = vec![BigInt::one()];
        }
        XqSeries { x_max, q_max, c }
    }

    fn one(x_max: usize, q_max: usize) -> XqSeries {
        XqSeries::monomial(x_max, q_max, 0)
    }

    /// Multiply by `1 - a^ad q^qd x^xd`.
    fn mul_one_minus(&mut self, ad: usize, qd: usize, xd: usize) {
        for x in (xd..=self.x_max).rev() {
            for q in (qd..=self.q_max).rev() {
                if xd == 0 && qd == 0 {
                    continue;
                }
                let src = self.c[x - xd][q - qd].clone();
                let dst = &mut self.c[x][q];
                for (i, v) in src.iter().enumerate() {
                    if dst.len() <= i + ad {
                        dst.resize(i + ad + 1, BigInt::zero());
                    }
                    dst[i + ad] -= v;
                }
            }
        }
    }

    /// Divide by `1 - q^qd x^xd`, `(qd, xd) != (0, 0)`.
    fn div_one_minus(&mut self, qd: usize, xd: usize) {
        assert!(qd + xd > 0);
        for x in xd..=self.x_max {
            for q in qd..=self.q_max {
                let src = self.c[x - xd][q - qd].clone();
                let dst = &mut self.c[x][q];
                if dst.len() < src.len() {
                    dst.resize(src.len(), BigInt::zero());
                }
                for (i, v) in src.iter().enumerate() {
                    dst[i] += v;
                }
            }
        }
    }

    fn add(&mut self, other: &XqSeries) {
        for x in 0..=self.x_max {
            for q in 0..=self.q_max {
                let src = &other.c[x][q];
                let dst = &mut self.c[x][q];
                if dst.len() < src.len() {
                    dst.resize(src.len(), BigInt::zero());
                }
                for (i, v) in src.iter().enumerate() {
                    dst[i] += v;
                }
            }
        }
    }

    fn trimmed(&self, x: usize, q: usize) -> Vec<BigInt> {
        let mut v = self.c[x][q].clone();
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    fn set_a(&mut self, value: i64) {
        for row in &mut self.c {
            for cell in row.iter_mut() {
                let mut acc = BigInt::zero();
                for (i, v) in cell.iter().enumerate() {
                    acc += v * num_traits::pow(BigInt::from(value), i);
                }
                *cell = vec![acc];
            }
        }
    }
}

fn render_a_poly(v: &[BigInt]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => c.to_string(),
            1 => format!("{c}*a"),
            _ => format!("{c}*a^{i}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn compare_series(report: &mut CheckReport, tag: &str, lhs: &XqSeries, rhs: &XqSeries) {
    for x in 0..=lhs.x_max {
        for q in 0..=lhs.q_max {
            let (l, r) = (lhs.trimmed(x, q), rhs.trimmed(x, q));
            if l != r {
                let diff: Vec<BigInt> = (0..l.len().max(r.len()))
                    .map(|i| l.get(i).cloned().unwrap_or_default() - r.get(i).cloned().unwrap_or_default())
                    .collect();
                report.fail_with(format!("{tag} x^{x} q^{q}"), render_a_poly(&diff));
            }
        }
    }
}

/// The product identity
/// `prod_{m>=0} (1 - a q^{m+1} x)/(1 - q^m x) = 1 + sum_n prod_j (1 - a q^j)/(1 - q^j) x^n`
/// with symbolic `a`; without `a`, its `a = 0` case and the shifted form
/// `prod_{m>=1} 1/(1 - q^m x) = 1 + sum_n q^n x^n / prod_j (1 - q^j)`.
pub fn q_product_identity_check(x_max: usize, q_max: usize, with_a: bool) -> CheckReport {
    let mut report = CheckReport::new("q_product_identity", "-")
        .param("xmax", x_max as i64)
        .param("qmax", q_max as i64)
        .param("symbolic_a", i64::from(with_a));
    let mut lhs = XqSeries::one(x_max, q_max);
    for m in 0..=q_max {
        lhs.mul_one_minus(1, m + 1, 1);
        lhs.div_one_minus(m, 1);
    }
    let mut rhs = XqSeries::one(x_max, q_max);
    for n in 1..=x_max {
        let mut term = XqSeries::monomial(x_max, q_max, n);
        for j in 1..=n {
            term.mul_one_minus(1, j, 0);
            term.div_one_minus(j, 0);
        }
        rhs.add(&term);
    }
    if with_a {
        compare_series(&mut report, "a", &lhs, &rhs);
        return report;
    }
    lhs.set_a(0);
    rhs.set_a(0);
    compare_series(&mut report, "a=0", &lhs, &rhs);

    let mut left = XqSeries::one(x_max, q_max);
    for m in 1..=q_max {
        left.div_one_minus(m, 1);
    }
    let mut right = XqSeries::one(x_max, q_max);
    for n in 1..=x_max.min(q_max) {
        let mut term = XqSeries::monomial(x_max, q_max, n);
        term.c[n][0].clear();
        term.c[n][n] = vec![BigInt::one()];
        for j in 1..=n {
            term.div_one_minus(j, 0);
        }
        right.add(&term);
    }
    compare_series(&mut report, "shifted", &left, &right);
    report
}

/// Exact ratio `a / b` of two Scalars, if both are rational.
pub fn rational_ratio(a: &Scalar, b: &Scalar) -> Option<BigRational> {
    let (a, b) = (a.as_rational()?, b.as_rational()?);
    if b.is_zero() {
        None
    } else {
        Some(a / b)
    }
}

pub fn is_rational_negative(c: &BigRational) -> bool {
    c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn poly(terms: &[(&[usize], i64, i64)]) -> PPoly<Scalar> {
        let mut out = PPoly::zero();
        for (mu, n, d) in terms {
            out.add_term(pp(mu), Scalar::from_ratio(*n, *d));
        }
        out
    }

    #[test]
    fn partition_basics() {
        let mu = pp(&[2, 1, 1]);
        assert_eq!(mu.size(), 4);
        assert_eq!(mu.z(), BigInt::from(4));
        assert_eq!(mu.conjugate(), pp(&[3, 1]));
        assert_eq!(mu.to_string(), "(2,1,1)");
        assert_eq!("(2,1,1)".parse::<Partition>().unwrap(), mu);
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
        assert!("(1,2)".parse::<Partition>().is_err());
        assert_eq!(Partition::all(5).len(), 7);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_apply(1, &PPoly::<Scalar>::p(1)).unwrap(), PPoly::one());
        assert_eq!(alpha_apply(-2, &PPoly::<Scalar>::one()).unwrap(), PPoly::p(2));
        assert_eq!(alpha_apply(0, &PPoly::<Scalar>::one()), Err(BosonError::ZeroMode));
    }

    #[test]
    fn heisenberg_relation() {
        for m in 1..=4i64 {
            for n in -4..=4i64 {
                if n == 0 {
                    continue;
                }
                for d in 0..=4 {
                    for mu in Partition::all(d) {
                        let f = PPoly::monomial(mu, Scalar::one());
                        let ab = alpha_apply(m, &alpha_apply(n, &f).unwrap()).unwrap();
                        let ba = alpha_apply(n, &alpha_apply(m, &f).unwrap()).unwrap();
                        let expect = if m + n == 0 { f.scale_rational(&rat(m)) } else { PPoly::zero() };
                        assert_eq!(ab.sub(&ba), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn cut_join_examples() {
        assert!(cut_join_apply(&PPoly::<Scalar>::p(1)).is_zero());
        assert_eq!(cut_join_apply(&poly(&[(&[1, 1], 1, 1)])), poly(&[(&[2], 1, 1)]));
        assert_eq!(cut_join_apply(&poly(&[(&[2], 1, 1)])), poly(&[(&[1, 1], 1, 1)]));
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_poly(&pp(&[1])), PPoly::p(1));
        assert_eq!(schur_poly(&pp(&[2])), poly(&[(&[1, 1], 1, 2), (&[2], 1, 2)]));
        assert_eq!(schur_poly(&pp(&[1, 1])), poly(&[(&[1, 1], 1, 2), (&[2], -1, 2)]));
    }

    #[test]
    fn p1_power_expansion() {
        for d in 0..=5 {
            let f = pieri_p1_power(d);
            let mut sum = PPoly::zero();
            for (lam, c) in &f {
                assert_eq!(*c, lam.hook_count(), "{lam}");
                sum = sum.add(&schur_poly(lam).scale(&Scalar::from_bigint(c.clone())));
            }
            assert_eq!(sum, PPoly::monomial(pp(&vec![1; d]), Scalar::one()));
        }
    }

    #[test]
    fn eigenvalue_examples() {
        assert!(cut_join_eigenvalue(&pp(&[1])).unwrap().is_zero());
        assert_eq!(cut_join_eigenvalue(&pp(&[2])).unwrap(), Scalar::one());
        assert_eq!(cut_join_eigenvalue(&pp(&[1, 1])).unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn diagonality_and_contents() {
        for lam in Partition::up_to(6) {
            let c = cut_join_eigenvalue(&lam).unwrap();
            assert_eq!(c, Scalar::from_int(lam.content_sum()), "{lam}");
        }
    }

    #[test]
    fn virasoro_examples() {
        for n in 1..=6 {
            let pn = PPoly::<Scalar>::p(n);
            assert_eq!(virasoro_w_apply(WKind::L(0), &pn, 6), pn.scale_rational(&rat(n as i64)));
        }
        assert!(virasoro_w_apply(WKind::L(1), &PPoly::<Scalar>::p(1), 4).is_zero());
        for d in 0..=4 {
            for mu in Partition::all(d) {
                let f = PPoly::monomial(mu, Scalar::one());
                assert_eq!(virasoro_w_apply(WKind::K(0), &f, d), cut_join_apply(&f));
            }
        }
    }

    #[test]
    fn hurwitz_tau_low_grades() {
        let tau = hurwitz_tau(2);
        assert_eq!(tau.grade_part(1), PPoly::p(1));
        let quarter = Scalar::from_ratio(1, 4);
        let plus = &quarter * &(&Scalar::q_pow(1) + &Scalar::q_pow(-1));
        let minus = &quarter * &(&Scalar::q_pow(1) - &Scalar::q_pow(-1));
        assert_eq!(tau.coeff(&pp(&[1, 1])), plus);
        assert_eq!(tau.coeff(&pp(&[2])), minus);
    }

    #[test]
    fn lambda_expansion_and_equation() {
        let two = PPoly::monomial(Partition::empty(), Scalar::q_pow(1));
        let e = lambda_expand(&two, 4).unwrap();
        let c = e.coeff(&Partition::empty());
        for b in 0..=4u32 {
            assert_eq!(c.coeff(b), BigRational::new(1.into(), factorial(u64::from(b))));
        }
        let tau = lambda_expand(&hurwitz_tau(4), 6).unwrap();
        assert!(check_cut_join_equation(&tau, 6).passed());
        for d in 0..=4 {
            assert_eq!(tau.grade_part(d), cut_join_evolution(d, 6));
        }
    }

    #[test]
    fn product_identities_small() {
        assert!(q_product_identity_check(3, 8, true).passed());
        assert!(q_product_identity_check(3, 8, false).passed());
    }
}
