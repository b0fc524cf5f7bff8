use num_rational::BigRational;

use super::Scalar;

/// Coefficients that can be added and scaled by rationals.
pub trait Module: Clone + Send + Sync + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale_rational(&self, c: &BigRational) -> Self;
}

/// Commutative coefficient rings.
pub trait Ring: Module {
    fn one() -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
}

impl Module for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale_rational(&self, c: &BigRational) -> Self {
        Scalar::scale_rational(self, c)
    }
}

impl Ring for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Scalar::mul_ref(self, other)
    }
}

/// Division-free determinant by expansion over row subsets, `O(2^n n)` ring
/// operations. `m` is square, indexed `m[row][col]`.
pub fn determinant<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    assert!(n <= 24, "determinant: {n}x{n} too large for subset expansion");
    let mut table: Vec<Option<R>> = vec![None; 1 << n];
    table[0] = Some(R::one());
    for mask in 1usize..(1 << n) {
        let col = mask.count_ones() as usize - 1;
        let mut acc = R::zero();
        let mut above = 0u32;
        for r in (0..n).rev() {
            if mask & (1 << r) == 0 {
                continue;
            }
            let entry = &m[r][col];
            if !entry.is_zero() {
                if let Some(sub) = &table[mask & !(1 << r)] {
                    if !sub.is_zero() {
                        let term = entry.mul_ref(sub);
                        acc = if above % 2 == 0 { acc.add_ref(&term) } else { acc.sub_ref(&term) };
                    }
                }
            }
            above += 1;
        }
        table[mask] = Some(acc);
    }
    table.pop().flatten().unwrap()
}
