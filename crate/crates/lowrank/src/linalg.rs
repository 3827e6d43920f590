//! Small exact linear algebra helpers: rational matrices with Gauss-Jordan
//! inversion, and fraction-free (Bareiss) rank over the integers.

use num_traits::{One, Zero};

use crate::exactnum::{BigInt, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Matrix {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Matrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                *m.at_mut(i, j) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    *out.at_mut(i, j) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn trace(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Gauss-Jordan inverse; None when singular.
    pub fn invert(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a.at(i, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.at(pivot, j).clone();
                    *a.at_mut(pivot, j) = a.at(col, j).clone();
                    *a.at_mut(col, j) = tmp;
                    let tmp = inv.at(pivot, j).clone();
                    *inv.at_mut(pivot, j) = inv.at(col, j).clone();
                    *inv.at_mut(col, j) = tmp;
                }
            }
            let p = a.at(col, col).clone();
            for j in 0..n {
                *a.at_mut(col, j) /= &p;
                *inv.at_mut(col, j) /= &p;
            }
            for i in 0..n {
                if i == col || a.at(i, col).is_zero() {
                    continue;
                }
                let f = a.at(i, col).clone();
                for j in 0..n {
                    let sa = &f * a.at(col, j);
                    *a.at_mut(i, j) -= sa;
                    let si = &f * inv.at(col, j);
                    *inv.at_mut(i, j) -= si;
                }
            }
        }
        Some(inv)
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        for i in (row + 1)..a.len() {
            for j in (col + 1)..ncols {
                let v = (&a[row][col] * &a[i][j] - &a[i][col] * &a[row][j]) / &prev;
                a[i][j] = v;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        row += 1;
        rank += 1;
        if row == a.len() {
            break;
        }
    }
    rank
}

/// Clear denominators of a rational vector, returning an integer vector
/// with the same span.
pub fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for x in v {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    v.iter().map(|x| x.numer() * (&den / x.denom())).collect()
}

/// Inner product <A, B> = trace(A^T B) of two equal-shape matrices.
pub fn frobenius_inner(a: &Matrix, b: &Matrix) -> Rational {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    let mut acc = Rational::zero();
    for i in 0..a.rows {
        for j in 0..a.cols {
            acc += a.at(i, j) * b.at(i, j);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn invert_round_trip() {
        let m = Matrix::new(2, 2, vec![q(2), q(1), q(5), q(3)]);
        let inv = m.invert().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let singular = Matrix::new(2, 2, vec![q(1), q(2), q(2), q(4)]);
        assert!(singular.invert().is_none());
    }

    #[test]
    fn rank_examples() {
        let b = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(integer_rank(&[b(&[1, 0]), b(&[0, 1])]), 2);
        assert_eq!(integer_rank(&[b(&[1, 2]), b(&[2, 4])]), 1);
        assert_eq!(integer_rank(&[b(&[0, 0])]), 0);
        assert_eq!(
            integer_rank(&[b(&[2, 3, 5]), b(&[4, 6, 10]), b(&[1, 1, 1])]),
            2
        );
    }
}
