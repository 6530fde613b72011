//! Dense square matrices for exact certificate arithmetic.
//!
//! Machine-integer products are attempted first and fall back to big
//! integers when an a-priori bound says the `i64` accumulator could overflow.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, data: vec![T::zero(); n * n] }
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data has wrong length");
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Position of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|v| !v.is_zero()).map(|k| (k / self.n, k % self.n))
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

impl Matrix<i64> {
    /// `scale·A - shift·I`, or `None` on overflow.
    pub fn scaled_shift(&self, scale: i64, shift: i64) -> Option<Self> {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.checked_mul(scale)?;
        }
        for i in 0..self.n {
            let d = &mut out.data[i * self.n + i];
            *d = d.checked_sub(shift)?;
        }
        Some(out)
    }

    fn max_abs(&self) -> i128 {
        self.data.iter().map(|v| i128::from(*v).abs()).max().unwrap_or(0)
    }

    /// Product, or `None` when the entries could exceed `i64`.
    pub fn mul(&self, other: &Self) -> Option<Self> {
        let n = self.n;
        let bound = self.max_abs().checked_mul(other.max_abs())?.checked_mul(n as i128)?;
        if bound >= i128::from(i64::MAX) {
            return None;
        }
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let acc = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in acc.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Some(Matrix { n, data: out })
    }

    /// `trace(A·B)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> i128 {
        let n = self.n;
        let mut t: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                t += i128::from(self.data[i * n + j]) * i128::from(other.data[j * n + i]);
            }
        }
        t
    }

    pub fn to_big(&self) -> Matrix<BigInt> {
        Matrix { n: self.n, data: self.data.iter().map(|&v| BigInt::from(v)).collect() }
    }
}

impl Matrix<BigInt> {
    pub fn scaled_shift(&self, scale: &BigInt, shift: &BigInt) -> Self {
        let mut out = Matrix { n: self.n, data: self.data.iter().map(|v| v * scale).collect() };
        for i in 0..self.n {
            out.data[i * self.n + i] -= shift;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Matrix { n, data: out }
    }

    pub fn trace_of_product(&self, other: &Self) -> BigInt {
        let n = self.n;
        let mut t = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                t += &self.data[i * n + j] * &other.data[j * n + i];
            }
        }
        t
    }
}

/// Rank by fraction-free (Bareiss) elimination over the integers.
pub fn integer_rank(rows: usize, cols: usize, entries: &[BigInt]) -> usize {
    let mut m: Vec<Vec<BigInt>> = entries.chunks(cols).map(<[BigInt]>::to_vec).collect();
    debug_assert_eq!(m.len(), rows);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for i in (rank + 1)..rows {
            for j in (col + 1)..cols {
                let v = (&m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank of a rational matrix, clearing denominators row by row first.
pub fn rational_rank(rows: usize, cols: usize, entries: &[Rational]) -> usize {
    let mut ints = Vec::with_capacity(entries.len());
    for row in entries.chunks(cols) {
        let l = crate::rational::common_denominator(row.iter());
        ints.extend(row.iter().map(|q| q.numer() * (&l / q.denom())));
    }
    integer_rank(rows, cols, &ints)
}

/// Leading principal minors `det(A[..k, ..k])` for `k = 1..=n`.
pub fn leading_minors(n: usize, entries: &[i64]) -> Vec<Rational> {
    let mut m: Vec<Rational> = entries.iter().map(|&v| Rational::from_integer(v.into())).collect();
    let mut minors = Vec::with_capacity(n);
    let mut det = Rational::one();
    for k in 0..n {
        let pivot = m[k * n + k].clone();
        if pivot.is_zero() {
            // a zero leading minor; the remaining ones are not needed by callers
            minors.push(Rational::zero());
            break;
        }
        det *= &pivot;
        minors.push(det.clone());
        for i in (k + 1)..n {
            let f = &m[i * n + k] / &pivot;
            for j in k..n {
                let v = &m[k * n + j] * &f;
                m[i * n + j] -= v;
            }
        }
    }
    minors
}

/// Inverse by Gauss–Jordan elimination, `None` when singular.
pub fn rational_inverse(n: usize, entries: &[Rational]) -> Option<Vec<Rational>> {
    let mut a = entries.to_vec();
    let mut inv = vec![Rational::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = Rational::one();
    }
    for col in 0..n {
        let pivot_row = (col..n).find(|&i| !a[i * n + col].is_zero())?;
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
                inv.swap(col * n + j, pivot_row * n + j);
            }
        }
        let p = a[col * n + col].clone();
        for j in 0..n {
            a[col * n + j] = &a[col * n + j] / &p;
            inv[col * n + j] = &inv[col * n + j] / &p;
        }
        for i in 0..n {
            if i == col || a[i * n + col].is_zero() {
                continue;
            }
            let f = a[i * n + col].clone();
            for j in 0..n {
                let (da, di) = (&a[col * n + j] * &f, &inv[col * n + j] * &f);
                a[i * n + j] -= da;
                inv[i * n + j] -= di;
            }
        }
    }
    Some(inv)
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn products_and_fallback() {
        let a = Matrix::from_vec(2, vec![1i64, 2, 3, 4]);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.data(), &[7, 10, 15, 22]);
        assert_eq!(a.trace_of_product(&a), 29);
        let big = Matrix::from_vec(2, vec![i64::MAX / 2, 0, 0, 1]);
        assert!(big.mul(&big).is_none());
        let b = big.to_big();
        assert_eq!(b.mul(&b).get(0, 0), &(BigInt::from(i64::MAX / 2) * BigInt::from(i64::MAX / 2)));
        let s = a.scaled_shift(2, 1).unwrap();
        assert_eq!(s.data(), &[1, 4, 6, 7]);
    }

    #[test]
    fn ranks() {
        let m: Vec<BigInt> = [1, 2, 3, 2, 4, 6, 1, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(integer_rank(3, 3, &m), 2);
        let q = vec![ratio(1, 2), ratio(1, 3), int(1), ratio(2, 3)];
        assert_eq!(rational_rank(2, 2, &q), 1);
    }

    #[test]
    fn minors_and_inverse() {
        // A_2 Cartan matrix
        let c = [2, -1, -1, 2];
        assert_eq!(leading_minors(2, &c), vec![int(2), int(3)]);
        let q: Vec<Rational> = c.iter().map(|&v| int(v)).collect();
        let inv = rational_inverse(2, &q).unwrap();
        assert_eq!(inv, vec![ratio(2, 3), ratio(1, 3), ratio(1, 3), ratio(2, 3)]);
        assert!(rational_inverse(2, &[int(1), int(2), int(2), int(4)]).is_none());
    }
}
