#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use fibercheck::laurent::LaurentPoly;
use fibercheck::presentation::{parse_presentation_file, CohomologyClass, Presentation, PresentationFile};
use fibercheck::quotients::FiniteQuotient;
use num_traits::ToPrimitive;

pub const KNOTS: &[&str] = &[
    "trefoil.pres",
    "trefoil_2gen.pres",
    "figure_eight.pres",
    "figure_eight_2gen.pres",
    "k5_1.pres",
    "k5_2.pres",
    "k5_2_2gen.pres",
    "k6_1.pres",
];

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load_file(name: &str) -> PresentationFile {
    let text = std::fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    parse_presentation_file(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn load(name: &str) -> (Presentation, CohomologyClass) {
    let f = load_file(name);
    let phi = f.class().unwrap();
    (f.presentation, phi)
}

/// Sparse polynomial with small coefficients, for oracles that must not
/// share code with the library.
pub type Poly = BTreeMap<i64, i128>;

pub fn padd(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (&e, &c) in b {
        *out.entry(e).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn pneg(a: &Poly) -> Poly {
    a.iter().map(|(&e, &c)| (e, -c)).collect()
}

pub fn psub(a: &Poly, b: &Poly) -> Poly {
    padd(a, &pneg(b))
}

pub fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&e, &c) in a {
        for (&f, &d) in b {
            *out.entry(e + f).or_insert(0) += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Ascending coefficients after dividing out `±t^k` so the lowest exponent
/// is 0 and the top coefficient is positive.
pub fn canonical(a: &Poly) -> Vec<i128> {
    let Some((&lo, _)) = a.iter().next() else {
        return Vec::new();
    };
    let hi = *a.keys().next_back().unwrap();
    let sign = if a[&hi] < 0 { -1 } else { 1 };
    (lo..=hi).map(|e| sign * a.get(&e).copied().unwrap_or(0)).collect()
}

pub fn to_poly(p: &LaurentPoly) -> Poly {
    p.to_pairs()
        .into_iter()
        .map(|(e, c)| (e, c.to_i128().expect("small coefficient")))
        .collect()
}

pub fn from_poly(p: &Poly) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().map(|(&e, &c)| (e, c as i64)))
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::from([(0, 1)]);
    }
    let mut out = Poly::new();
    for j in 0..n {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = pmul(&m[0][j], &cofactor_det(&minor));
        out = if j % 2 == 0 {
            padd(&out, &term)
        } else {
            psub(&out, &term)
        };
    }
    out
}

/// `det(V − t·Vᵀ)` for a Seifert matrix `V`.
pub fn seifert_alexander(v: &[Vec<i64>]) -> Vec<i128> {
    let m: Vec<Vec<Poly>> = (0..v.len())
        .map(|i| {
            (0..v.len())
                .map(|j| {
                    let mut p = Poly::new();
                    p.insert(0, v[i][j] as i128);
                    p.insert(1, -(v[j][i] as i128));
                    p.retain(|_, c| *c != 0);
                    p
                })
                .collect()
        })
        .collect();
    canonical(&cofactor_det(&m))
}

/// Divisibility of `φ` on `ker α` by breadth-first search over pairs
/// `(group element, φ mod M)` with `M = |G|·gcd φ`: the residues reachable at
/// the identity form the subgroup `div·ℤ/M`.
pub fn div_by_pair_search(q: &FiniteQuotient, phi: &CohomologyClass) -> u64 {
    let g = phi.images.len();
    let gcd = phi
        .images
        .iter()
        .fold(0i64, |a, &b| num_integer::gcd(a, b))
        .unsigned_abs();
    let m = q.order() as u64 * gcd;
    let table = q.regular_table();
    let inv: Vec<Vec<usize>> = (0..q.order())
        .map(|e| {
            (0..g)
                .map(|j| (0..q.order()).find(|&f| table[f][j] == e).unwrap())
                .collect()
        })
        .collect();
    let n = q.order();
    let mut seen = vec![false; n * m as usize];
    let mut stack = vec![(0usize, 0u64)];
    seen[0] = true;
    while let Some((e, r)) = stack.pop() {
        for j in 0..g {
            let a = phi.images[j].rem_euclid(m as i64) as u64;
            for (f, s) in [(table[e][j], (r + a) % m), (inv[e][j], (r + m - a) % m)] {
                let idx = f * m as usize + s as usize;
                if !seen[idx] {
                    seen[idx] = true;
                    stack.push((f, s));
                }
            }
        }
    }
    (1..m).find(|&r| seen[r as usize]).unwrap_or(m)
}
