//! Exact determinant and rank of Laurent matrices by evaluation at integer
//! points modulo word-sized primes, followed by interpolation and Chinese
//! remaindering.
//!
//! Exactness comes from a priori bounds. After each row and column is shifted
//! by a unit `t^k` so that all entries are ordinary polynomials, every minor
//! has degree at most `D` (sum of row degrees, or of column degrees) and
//! coefficients bounded in absolute value by `B`. Each coefficient is at most
//! the maximum of `|det|` on the unit circle, so by Hadamard `B` can be the
//! product over rows of `√(Σ_j ‖a_ij‖₁²)`.
//! Interpolating at `D + 1` points modulo primes whose product exceeds `2B`
//! recovers the determinant exactly. For the rank, the largest rank seen at
//! any sampled point is a lower bound (a nonzero minor modulo `p` is nonzero
//! over ℤ), and once all points and primes have been sampled it is also an
//! upper bound, since every larger minor then vanishes identically.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{LaurentMatrix, LaurentPoly};

/// Residue polynomials per entry, after unit shifts.
struct Prepared {
    rows: usize,
    cols: usize,
    /// Exponent `Σ row shifts + Σ col shifts` to reapply to the determinant.
    shift: i64,
    /// Dense ascending coefficients per entry, row-major.
    entries: Vec<Vec<BigInt>>,
    degree_bound: usize,
    coeff_bound: BigInt,
}

fn prepare(m: &LaurentMatrix) -> Option<Prepared> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut row_min = vec![0i64; rows];
    for (i, rm) in row_min.iter_mut().enumerate() {
        *rm = (0..cols).filter_map(|j| m.get(i, j).min_exp()).min()?;
    }
    let mut col_min = vec![i64::MAX; cols];
    for (i, &rm) in row_min.iter().enumerate() {
        for (j, cm) in col_min.iter_mut().enumerate() {
            if let Some(lo) = m.get(i, j).min_exp() {
                *cm = (*cm).min(lo - rm);
            }
        }
    }
    for cm in col_min.iter_mut() {
        if *cm == i64::MAX {
            *cm = 0;
        }
    }
    let mut entries = Vec::with_capacity(rows * cols);
    let mut row_deg = vec![0usize; rows];
    let mut col_deg = vec![0usize; cols];
    let mut coeff_bound = BigInt::one();
    for i in 0..rows {
        let mut sq = BigInt::zero();
        for j in 0..cols {
            let e = m.get(i, j);
            let mut v = Vec::new();
            if let Some(lo) = e.min_exp() {
                let offset = (lo - row_min[i] - col_min[j]) as usize;
                v.resize(offset, BigInt::zero());
                v.extend_from_slice(e.dense_coeffs());
                let deg = v.len() - 1;
                row_deg[i] = row_deg[i].max(deg);
                col_deg[j] = col_deg[j].max(deg);
                let l1 = e.l1_norm();
                sq += &l1 * &l1;
            }
            entries.push(v);
        }
        let mut root = sq.sqrt();
        if &root * &root < sq {
            root += 1;
        }
        if root > BigInt::one() {
            coeff_bound *= root;
        }
    }
    let degree_bound = row_deg.iter().sum::<usize>().min(col_deg.iter().sum());
    Some(Prepared {
        rows,
        cols,
        shift: row_min.iter().sum::<i64>() + col_min.iter().sum::<i64>(),
        entries,
        degree_bound,
        coeff_bound,
    })
}

const PRIME_START: u64 = (1 << 31) - 1;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below 2³¹ in descending order, enough that their product exceeds
/// `2·bound`.
fn primes_for(bound: &BigInt) -> Vec<u64> {
    let target: BigInt = bound * 2u32;
    let mut product = BigInt::one();
    let mut primes = Vec::new();
    let mut cand = PRIME_START;
    while product <= target {
        while !is_prime(cand) {
            cand -= 2;
        }
        product *= cand;
        primes.push(cand);
        cand -= 2;
    }
    primes
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    u64::try_from(&r).expect("residue fits")
}

fn residues(prep: &Prepared, p: u64) -> Vec<Vec<u64>> {
    prep.entries
        .iter()
        .map(|e| e.iter().map(|c| reduce(c, p)).collect())
        .collect()
}

fn evaluate(res: &[Vec<u64>], x: u64, p: u64) -> Vec<u64> {
    res.iter()
        .map(|e| e.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p))
        .collect()
}

/// Determinant of a square matrix over 𝔽_p, consuming it.
fn det_mod(mut a: Vec<u64>, n: usize, p: u64) -> u64 {
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i * n + k] != 0) else {
            return 0;
        };
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = (p - det) % p;
        }
        let pv = a[k * n + k];
        det = det * pv % p;
        let inv = inv_mod(pv, p);
        for i in k + 1..n {
            let f = a[i * n + k] * inv % p;
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for j in k + 1..n {
                a[i * n + j] = (a[i * n + j] + nf * a[k * n + j]) % p;
            }
        }
    }
    det
}

fn rank_mod(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.swap(r * cols + j, piv * cols + j);
            }
        }
        let inv = inv_mod(a[r * cols + c], p);
        for i in r + 1..rows {
            let f = a[i * cols + c] * inv % p;
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for j in c..cols {
                a[i * cols + j] = (a[i * cols + j] + nf * a[r * cols + j]) % p;
            }
        }
        r += 1;
    }
    r
}

/// Coefficients of the polynomial of degree ≤ `values.len() − 1` through
/// `(i, values[i])`, over 𝔽_p.
fn interpolate(values: &[u64], p: u64) -> Vec<u64> {
    let n = values.len();
    // Newton divided differences on the nodes 0, 1, …, n−1.
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = (dd[i] + p - dd[i - 1]) % p;
            dd[i] = num * inv_mod(level as u64 % p, p) % p;
        }
    }
    let mut coeffs = vec![0u64; n];
    for k in (0..n).rev() {
        // coeffs ← coeffs · (x − k) + dd[k]
        let mut next = vec![0u64; n];
        for i in 0..n {
            if coeffs[i] == 0 {
                continue;
            }
            if i + 1 < n {
                next[i + 1] = (next[i + 1] + coeffs[i]) % p;
            }
            next[i] = (next[i] + (p - (k as u64 % p)) * coeffs[i]) % p;
        }
        next[0] = (next[0] + dd[k]) % p;
        coeffs = next;
    }
    coeffs
}

/// Exact determinant; `m` must be square.
pub(crate) fn det(m: &LaurentMatrix) -> LaurentPoly {
    let n = m.rows();
    debug_assert_eq!(n, m.cols());
    if n == 0 {
        return LaurentPoly::one();
    }
    let Some(prep) = prepare(m) else {
        return LaurentPoly::zero();
    };
    let primes = primes_for(&prep.coeff_bound);
    let points = prep.degree_bound + 1;
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); points];
    let mut modulus = BigInt::one();
    for &p in &primes {
        let res = residues(&prep, p);
        let values: Vec<u64> = (0..points as u64)
            .into_par_iter()
            .map(|x| det_mod(evaluate(&res, x, p), n, p))
            .collect();
        let coeffs = interpolate(&values, p);
        crt_step(&mut acc, &modulus, &coeffs, p);
        modulus *= p;
    }
    let half: BigInt = &modulus / 2u32;
    for c in acc.iter_mut() {
        if *c > half {
            *c -= &modulus;
        }
    }
    LaurentPoly::from_dense(prep.shift, acc)
}

fn crt_step(acc: &mut [BigInt], modulus: &BigInt, residues: &[u64], p: u64) {
    let m_mod_p = reduce(modulus, p);
    let m_inv = inv_mod(m_mod_p, p);
    for (a, &r) in acc.iter_mut().zip(residues) {
        let cur = reduce(a, p);
        let k = (r + p - cur) % p * m_inv % p;
        if k != 0 {
            *a += modulus * k;
        }
    }
}

/// Exact rank over the fraction field ℚ(t).
pub(crate) fn rank(m: &LaurentMatrix) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let full = rows.min(cols);
    if full == 0 {
        return 0;
    }
    // Zero rows do not contribute; drop them so the shift is defined.
    let nonzero_rows: Vec<usize> = (0..rows)
        .filter(|&i| (0..cols).any(|j| !m.get(i, j).is_zero()))
        .collect();
    if nonzero_rows.is_empty() {
        return 0;
    }
    let all_cols: Vec<usize> = (0..cols).collect();
    let m = m.submatrix(&nonzero_rows, &all_cols);
    let rows = m.rows();
    let full = rows.min(cols);
    let prep = prepare(&m).expect("no zero rows");
    let primes = primes_for(&prep.coeff_bound);
    let mut best = 0;
    for &p in &primes {
        let res = residues(&prep, p);
        for x in 0..=prep.degree_bound as u64 {
            let r = rank_mod(evaluate(&res, x, p), prep.rows, prep.cols, p);
            best = best.max(r);
            if best == full {
                return best;
            }
        }
    }
    best
}
