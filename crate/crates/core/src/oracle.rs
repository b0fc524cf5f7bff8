//! Disconnected simple Hurwitz numbers by brute force in the symmetric group.
//!
//! No characters are used, so these counts are independent of everything the
//! tau-function constructions share.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::boson::{self, Partition};
use crate::coeff::factorial;
use crate::kacschwarz::CheckReport;
use crate::models::ModelId;

pub const MAX_DEGREE: usize = 6;
pub const MAX_TRANSPOSITIONS: u32 = 8;
const MEET_IN_MIDDLE_FROM: u32 = 6;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("query out of range: d = {d}, b = {b} (limits d <= {MAX_DEGREE}, b <= {MAX_TRANSPOSITIONS})")]
    OutOfRange { d: usize, b: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HurwitzQuery {
    pub mu: Partition,
    pub b: u32,
}

type Perm = Vec<u8>;

/// `(a b)[i] = a[b[i]]`: apply `b` first.
fn compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&i| a[i as usize]).collect()
}

fn inverse(p: &[u8]) -> Perm {
    let mut out = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        out[v as usize] = i as u8;
    }
    out
}

fn transpositions(d: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut t: Perm = (0..d as u8).collect();
            t.swap(i, j);
            out.push(t);
        }
    }
    out
}

/// Consecutive cycles `(0 1 .. mu_1-1)(mu_1 ..)...`.
pub fn representative(mu: &Partition) -> Vec<u8> {
    let mut p: Perm = (0..mu.size() as u8).collect();
    let mut start = 0;
    for &len in mu.parts() {
        for k in 0..len {
            p[start + k] = (start + (k + 1) % len) as u8;
        }
        start += len;
    }
    p
}

/// Cycle type of a permutation.
pub fn cycle_type(p: &[u8]) -> Partition {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for s in 0..p.len() {
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        if len > 0 {
            parts.push(len);
        }
    }
    Partition::new(parts)
}

/// Products `t_k ... t_1` of all `k`-tuples, with multiplicity.
fn product_counts(ts: &[Perm], d: usize, k: u32) -> HashMap<Perm, u64> {
    let mut cur: HashMap<Perm, u64> = HashMap::new();
    cur.insert((0..d as u8).collect(), 1);
    for _ in 0..k {
        let mut next = HashMap::new();
        for (p, c) in &cur {
            for t in ts {
                *next.entry(compose(t, p)).or_insert(0) += c;
            }
        }
        cur = next;
    }
    cur
}

fn dfs(ts: &[Perm], cur: &Perm, left: u32, target: &Perm) -> u64 {
    if left == 0 {
        return u64::from(cur == target);
    }
    ts.iter().map(|t| dfs(ts, &compose(t, cur), left - 1, target)).sum()
}

/// Ordered `b`-tuples of transpositions with `t_b ... t_1 = target`.
pub fn count_for(target: &[u8], b: u32) -> Result<u64, OracleError> {
    let d = target.len();
    if d == 0 || d > MAX_DEGREE || b > MAX_TRANSPOSITIONS {
        return Err(OracleError::OutOfRange { d, b });
    }
    let ts = transpositions(d);
    let target = target.to_vec();
    if b < MEET_IN_MIDDLE_FROM {
        return Ok(dfs(&ts, &(0..d as u8).collect(), b, &target));
    }
    // t_b..t_{h+1} = P2 and t_h..t_1 = P1 with P2 P1 = target.
    let h = b / 2;
    let first = product_counts(&ts, d, h);
    let second = product_counts(&ts, d, b - h);
    Ok(second
        .iter()
        .map(|(p2, c2)| c2 * first.get(&compose(&inverse(p2), &target)).copied().unwrap_or(0))
        .sum())
}

/// `N_b(mu)` for the consecutive-cycle representative.
pub fn count_factorizations(q: &HurwitzQuery) -> Result<u64, OracleError> {
    count_for(&representative(&q.mu), q.b)
}

/// Counts for `samples` random conjugates of the representative.
pub fn conjugate_counts(q: &HurwitzQuery, samples: usize, seed: u64) -> Result<Vec<u64>, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rep = representative(&q.mu);
    (0..samples)
        .map(|_| {
            let mut g: Perm = (0..rep.len() as u8).collect();
            g.shuffle(&mut rng);
            count_for(&compose(&compose(&g, &rep), &inverse(&g)), q.b)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub d: usize,
    pub mu: String,
    pub b: u32,
    pub count: u64,
    pub normalized: String,
    pub tau: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn contract(count: u64, b: u32, mu: &Partition) -> BigRational {
    BigRational::new(BigInt::from(count), factorial(u64::from(b)) * mu.z())
}

/// One row per `(mu, b)`: oracle value against the `p_mu lambda^b` coefficient of the tau.
pub fn oracle_table(d_max: usize, b_max: u32) -> Result<Vec<OracleRow>, OracleError> {
    if d_max > MAX_DEGREE || b_max > MAX_TRANSPOSITIONS {
        return Err(OracleError::OutOfRange { d: d_max, b: b_max });
    }
    let tau = boson::lambda_expand(&boson::hurwitz_tau(d_max), b_max).expect("hurwitz tau is Laurent in u");
    let queries: Vec<HurwitzQuery> = (1..=d_max)
        .flat_map(Partition::all)
        .flat_map(|mu| (0..=b_max).map(move |b| HurwitzQuery { mu: mu.clone(), b }))
        .collect();
    queries
        .par_iter()
        .map(|q| {
            let count = count_factorizations(q)?;
            let normalized = contract(count, q.b, &q.mu);
            let coeff = tau.coeff(&q.mu).coeff(q.b);
            Ok(OracleRow {
                d: q.mu.size(),
                mu: q.mu.to_string(),
                b: q.b,
                count,
                normalized: normalized.to_string(),
                tau: coeff.to_string(),
                matches: normalized == coeff,
            })
        })
        .collect()
}

/// Grade-2 block of the tau is `(u^2 + u^-2)/4 p_1^2 + (u^2 - u^-2)/4 p_2`; with
/// `u^2 = e^lambda` both columns have `lambda^b` coefficient `1/(2 b!)` on the
/// right parity. Checks that the contract reproduces it at d <= 2.
fn prevalidate(b_max: u32, report: &mut CheckReport) {
    let half = |b: u32| BigRational::new(1.into(), factorial(u64::from(b)) * 2);
    let zero = BigRational::from_integer(0.into());
    for b in 0..=b_max {
        let cases = [
            (Partition::new(vec![1]), if b == 0 { BigRational::from_integer(1.into()) } else { zero.clone() }),
            (Partition::new(vec![1, 1]), if b % 2 == 0 { half(b) } else { zero.clone() }),
            (Partition::new(vec![2]), if b % 2 == 1 { half(b) } else { zero.clone() }),
        ];
        for (mu, closed) in cases {
            match count_factorizations(&HurwitzQuery { mu: mu.clone(), b }) {
                Ok(n) if contract(n, b, &mu) == closed => {}
                Ok(n) => report.fail_with(format!("contract at p{mu} b={b}"), contract(n, b, &mu)),
                Err(e) => report.fail_with("contract", e),
            }
        }
    }
    let grade2 = boson::hurwitz_tau(2).grade_part(2);
    let u2 = crate::coeff::Scalar::q_pow(1);
    let u2inv = crate::coeff::Scalar::q_pow(-1);
    let quarter = BigRational::new(1.into(), 4.into());
    let p1 = boson::PPoly::p(1);
    let closed = p1
        .mul(&p1)
        .scale(&(&u2 + &u2inv).scale_rational(&quarter))
        .add(&boson::PPoly::p(2).scale(&(&u2 - &u2inv).scale_rational(&quarter)));
    if grade2 != closed {
        report.fail_with("grade-2 closed form", "mismatch");
    }
}

pub fn check_tau_vs_oracle(d_max: usize, b_max: u32) -> CheckReport {
    let mut report = CheckReport::new("tau_vs_oracle", ModelId::Hurwitz)
        .param("dmax", d_max as i64)
        .param("bmax", i64::from(b_max));
    prevalidate(b_max, &mut report);
    let rows = match oracle_table(d_max, b_max) {
        Ok(r) => r,
        Err(e) => {
            report.fail_with("oracle", e);
            return report;
        }
    };
    for row in &rows {
        if !row.matches {
            report.fail_with(format!("p{} b={}", row.mu, row.b), format!("{} vs {}", row.normalized, row.tau));
        }
        let mu: Partition = row.mu.parse().expect("own rendering");
        let parity = (row.d - mu.len()) as u32 % 2;
        if row.count != 0 && row.b % 2 != parity {
            report.fail_with(format!("parity p{} b={}", row.mu, row.b), row.count);
        }
    }
    for d in 1..=d_max {
        for mu in Partition::all(d) {
            let q = HurwitzQuery { mu: mu.clone(), b: b_max.min(4) };
            let base = count_factorizations(&q);
            match (base, conjugate_counts(&q, 3, d as u64)) {
                (Ok(n), Ok(others)) if others.iter().all(|&m| m == n) => {}
                _ => report.fail_with(format!("conjugation p{mu}"), "count differs"),
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(parts: &[usize], b: u32) -> HurwitzQuery {
        HurwitzQuery { mu: Partition::new(parts.to_vec()), b }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_factorizations(&q(&[2], 1)).unwrap(), 1);
        assert_eq!(count_factorizations(&q(&[1, 1], 1)).unwrap(), 0);
        // the two ways to write a 3-cycle as a product of two transpositions, times 3 rotations
        let n = count_factorizations(&q(&[3], 2)).unwrap();
        let brute = transpositions(3)
            .iter()
            .flat_map(|a| transpositions(3).into_iter().map(move |b| compose(&b, a)))
            .filter(|p| *p == representative(&Partition::new(vec![3])))
            .count() as u64;
        assert_eq!(n, brute);
    }

    #[test]
    fn representative_has_type() {
        for mu in Partition::up_to(6).into_iter().filter(|m| !m.is_empty()) {
            assert_eq!(cycle_type(&representative(&mu)), mu);
        }
    }

    #[test]
    fn meet_in_middle_agrees_with_dfs() {
        let target = representative(&Partition::new(vec![2, 1, 1]));
        let ts = transpositions(4);
        let id: Perm = (0..4).collect();
        assert_eq!(count_for(&target, 7).unwrap(), dfs(&ts, &id, 7, &target));
    }

    #[test]
    fn out_of_range() {
        assert!(count_factorizations(&q(&[7], 1)).is_err());
        assert!(count_factorizations(&q(&[2], 9)).is_err());
    }

    #[test]
    fn sweep_small() {
        let r = check_tau_vs_oracle(3, 4);
        assert!(r.passed(), "{r:?}");
    }
}
