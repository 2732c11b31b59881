//! Smith normal form over ℤ, with the column transform kept so that the
//! integer kernel of a relation matrix can be read off.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive diagonal entries `d_1 | d_2 | …`, one per unit of rank.
    pub diagonal: Vec<BigInt>,
    /// Unimodular `V` (cols × cols) with `U·A·V = D` for some unimodular `U`.
    pub col_transform: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// A ℤ-basis of `{v : A·v = 0}`: the columns of `V` past the rank.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let n = self.col_transform.len();
        (self.rank()..n)
            .map(|k| (0..n).map(|i| self.col_transform[i][k].clone()).collect())
            .collect()
    }
}

/// Smith normal form of a `rows × cols` integer matrix.
#[allow(clippy::needless_range_loop)]
pub fn smith_form(matrix: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = matrix.len();
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols);
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut diagonal = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry in the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(diagonal, v);
            };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    col_axpy(&mut a, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let s = a[i][j].clone();
                        a[t][j] += s;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
    }
    finish(diagonal, v)
}

fn finish(diagonal: Vec<BigInt>, col_transform: Vec<Vec<BigInt>>) -> SmithForm {
    SmithForm {
        diagonal,
        col_transform,
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// `col[dst] -= q · col[src]`.
fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let s = q * &row[src];
        row[dst] -= s;
    }
}

/// Nontrivial invariant factors (those > 1).
pub fn torsion_of(form: &SmithForm) -> Vec<BigInt> {
    form.diagonal.iter().filter(|d| !d.is_one()).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Determinantal divisors: gcd of all k×k minors, by brute force.
    fn determinantal_divisors(m: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
        fn det(m: &[Vec<i64>], rows: &[usize], cols: &[usize]) -> BigInt {
            if rows.is_empty() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for (k, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = BigInt::from(m[rows[0]][c]) * det(m, &rows[1..], &rest);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let rows = m.len();
        let mut out = Vec::new();
        for k in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for r in subsets(rows, k) {
                for c in subsets(cols, k) {
                    g = g.gcd(&det(m, &r, &c));
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(g);
        }
        out
    }

    #[test]
    fn small_examples() {
        // ⟨x | x²⟩
        let f = smith_form(&[vec![2]], 1);
        assert_eq!(f.diagonal, vec![BigInt::from(2)]);
        // trefoil Wirtinger exponent sums
        let f = smith_form(&[vec![1, -1, 0], vec![0, 1, -1]], 3);
        assert_eq!(f.diagonal, vec![BigInt::one(), BigInt::one()]);
        let ker = f.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert!(ker[0].iter().all(|x| x.abs().is_one()));
        let f = smith_form(&[], 2);
        assert_eq!(f.rank(), 0);
        assert_eq!(f.kernel_basis().len(), 2);
    }

    proptest! {
        #[test]
        fn matches_determinantal_divisors(
            rows in 1usize..4,
            cols in 1usize..4,
            seed in prop::collection::vec(-6i64..=6, 16),
        ) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            let f = smith_form(&m, cols);
            let dd = determinantal_divisors(&m, cols);
            prop_assert_eq!(f.rank(), dd.len());
            let mut prev = BigInt::one();
            for (k, d) in dd.iter().enumerate() {
                prop_assert_eq!(&f.diagonal[k], &(d / &prev));
                prev = d.clone();
            }
            for w in f.diagonal.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            // kernel vectors really are in the kernel
            for kv in f.kernel_basis() {
                for r in &m {
                    let s: BigInt = r.iter().zip(&kv).map(|(a, b)| BigInt::from(*a) * b).sum();
                    prop_assert!(s.is_zero());
                }
            }
        }
    }
}
