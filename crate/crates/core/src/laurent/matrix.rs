use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::dense;
use super::{modular, LaurentError, LaurentPoly};

/// Matrices up to this dimension use Bareiss elimination for `det`; larger
/// ones go through the multimodular route.
const BAREISS_DET_MAX: usize = 10;
/// Same cutoff for `rank_over_fraction_field`, on `rows · cols`.
const BAREISS_RANK_MAX_CELLS: usize = 100;

/// Dense row-major matrix over ℤ[t^±1].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        LaurentMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &LaurentMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let r: Vec<usize> = (r0..r0 + rows).collect();
        let c: Vec<usize> = (c0..c0 + cols).collect();
        self.submatrix(&r, &c)
    }

    /// Drops columns `start..start + width`.
    pub fn delete_columns(&self, start: usize, width: usize) -> Self {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j < start || j >= start + width).collect();
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, &keep)
    }

    /// Stacks `blocks` vertically; all must have the same column count.
    pub fn vstack(blocks: &[LaurentMatrix]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            out.put_block(r, 0, b);
            r += b.rows;
        }
        out
    }

    /// Exact determinant, not just up to units.
    pub fn det(&self) -> Result<LaurentPoly, LaurentError> {
        if !self.is_square() {
            return Err(LaurentError::NonSquare(self.rows, self.cols));
        }
        if self.rows <= BAREISS_DET_MAX {
            self.det_bareiss()
        } else {
            Ok(modular::det(self))
        }
    }

    /// Determinant by fraction-free Bareiss elimination over ℤ[t], after
    /// multiplying each row by a power of `t` to clear negative exponents.
    pub fn det_bareiss(&self) -> Result<LaurentPoly, LaurentError> {
        if !self.is_square() {
            return Err(LaurentError::NonSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one());
        }
        let Some((mut a, shift)) = self.polynomial_rows() else {
            return Ok(LaurentPoly::zero());
        };
        let mut negate = false;
        let mut prev = dense::one();
        for k in 0..n {
            let Some(piv) = pick_pivot(&a, k, k, n) else {
                return Ok(LaurentPoly::zero());
            };
            if piv != k {
                a.swap(piv, k);
                negate = !negate;
            }
            eliminate(&mut a, k, k, &prev);
            prev = a[k][k].clone();
        }
        let d = LaurentPoly::from_dense(shift, std::mem::take(&mut a[n - 1][n - 1]));
        Ok(if negate { -d } else { d })
    }

    /// Rank over the field of rational functions ℚ(t).
    pub fn rank_over_fraction_field(&self) -> usize {
        if self.rows * self.cols <= BAREISS_RANK_MAX_CELLS {
            self.rank_bareiss()
        } else {
            modular::rank(self)
        }
    }

    /// Rank via fraction-free elimination with exact zero tests.
    pub fn rank_bareiss(&self) -> usize {
        let nonzero: Vec<usize> = (0..self.rows)
            .filter(|&i| (0..self.cols).any(|j| !self.get(i, j).is_zero()))
            .collect();
        let all: Vec<usize> = (0..self.cols).collect();
        let m = self.submatrix(&nonzero, &all);
        let Some((mut a, _)) = m.polynomial_rows() else {
            return 0;
        };
        let rows = m.rows;
        let mut rank = 0;
        let mut prev = dense::one();
        for c in 0..m.cols {
            if rank == rows {
                break;
            }
            let Some(piv) = pick_pivot(&a, rank, c, rows) else {
                continue;
            };
            a.swap(piv, rank);
            eliminate(&mut a, rank, c, &prev);
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    /// The determinant by the multimodular route regardless of size.
    pub fn det_multimodular(&self) -> Result<LaurentPoly, LaurentError> {
        if !self.is_square() {
            return Err(LaurentError::NonSquare(self.rows, self.cols));
        }
        Ok(modular::det(self))
    }

    /// The rank by the multimodular route regardless of size.
    pub fn rank_multimodular(&self) -> usize {
        modular::rank(self)
    }

    /// Rows as dense ordinary polynomials after multiplying row `i` by
    /// `t^{-min_exp(row i)}`; returns the total shift. `None` if some row is
    /// entirely zero.
    fn polynomial_rows(&self) -> Option<(Vec<Vec<Vec<BigInt>>>, i64)> {
        let mut shift = 0;
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let lo = (0..self.cols).filter_map(|j| self.get(i, j).min_exp()).min()?;
            shift += lo;
            let row = (0..self.cols)
                .map(|j| {
                    let e = self.get(i, j);
                    match e.min_exp() {
                        None => Vec::new(),
                        Some(el) => {
                            let mut v = vec![BigInt::zero(); (el - lo) as usize];
                            v.extend_from_slice(e.dense_coeffs());
                            v
                        }
                    }
                })
                .collect();
            out.push(row);
        }
        Some((out, shift))
    }
}

/// Row in `from..to` with a nonzero entry in column `col`, preferring the
/// lowest degree to limit growth.
fn pick_pivot(a: &[Vec<Vec<BigInt>>], from: usize, col: usize, to: usize) -> Option<usize> {
    (from..to)
        .filter(|&i| !a[i][col].is_empty())
        .min_by_key(|&i| (a[i][col].len(), i))
}

/// One Bareiss step with pivot `a[k][c]` and previous pivot `prev`.
fn eliminate(a: &mut [Vec<Vec<BigInt>>], k: usize, c: usize, prev: &[BigInt]) {
    let (top, rest) = a.split_at_mut(k + 1);
    let pivot_row = &top[k];
    let pivot = &pivot_row[c];
    for row in rest.iter_mut() {
        let factor = std::mem::take(&mut row[c]);
        for j in c + 1..pivot_row.len() {
            let lhs = dense::mul(pivot, &row[j]);
            let rhs = if factor.is_empty() {
                Vec::new()
            } else {
                dense::mul(&factor, &pivot_row[j])
            };
            let num = dense::sub(&lhs, &rhs);
            row[j] = if prev.len() == 1 && prev[0].is_one() {
                num
            } else {
                dense::div_exact(&num, prev).expect("Bareiss division is exact")
            };
        }
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = LaurentMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
