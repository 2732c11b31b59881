//! Twisted Alexander polynomials of `(π, φ, α)` for finite quotients `α`.
//!
//! For a deficiency-one presentation the order of the first twisted
//! homology is computed as Wada's quotient `det(A_j) / det(E(x_j) − I)`
//! times the order of the zeroth homology.

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::foxcalc::{fox_matrix, generator_minus_identity};
use crate::laurent::{LaurentError, LaurentMatrix, LaurentPoly};
use crate::presentation::{CohomologyClass, Presentation, PresentationError};
use crate::quotients::{FiniteQuotient, QuotientError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlexanderError {
    #[error("presentation has deficiency {0}; Wada's quotient needs deficiency one")]
    DeficiencyNotOne(i64),
    #[error(transparent)]
    Class(#[from] PresentationError),
    #[error("column {0} is not admissible: φ vanishes on that generator")]
    InadmissibleColumn(usize),
    #[error("no generator has nonzero φ-value")]
    NoAdmissibleColumn,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl From<QuotientError> for AlexanderError {
    fn from(e: QuotientError) -> Self {
        AlexanderError::InternalInconsistency(e.to_string())
    }
}

impl From<LaurentError> for AlexanderError {
    fn from(e: LaurentError) -> Self {
        AlexanderError::InternalInconsistency(e.to_string())
    }
}

fn poly_as_string<S: Serializer>(p: &LaurentPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn poly_from_string<'de, D: Deserializer<'de>>(d: D) -> Result<LaurentPoly, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedAlexanderResult {
    /// Normalized; zero exactly when `vanishing`.
    #[serde(serialize_with = "poly_as_string", deserialize_with = "poly_from_string")]
    pub delta1: LaurentPoly,
    pub vanishing: bool,
    #[serde(serialize_with = "poly_as_string", deserialize_with = "poly_from_string")]
    pub delta0: LaurentPoly,
    #[serde(serialize_with = "poly_as_string", deserialize_with = "poly_from_string")]
    pub wada_num: LaurentPoly,
    #[serde(serialize_with = "poly_as_string", deserialize_with = "poly_from_string")]
    pub wada_den: LaurentPoly,
    /// 1-based generator whose column block was deleted.
    pub column_used: usize,
    pub quotient_order: usize,
    pub div_phi_alpha: u64,
    pub monic: Option<bool>,
    pub degree: Option<i64>,
}

/// First index with `φ(x_j) ≠ 0` (0-based).
pub fn default_column(phi: &CohomologyClass) -> Option<usize> {
    phi.images.iter().position(|&v| v != 0)
}

/// Order of the zeroth twisted homology, `t^{div φ_α} − 1`.
///
/// The zeroth homology is `ℤ[t^{±1}]` modulo `t^{φ(k)} − 1` for `k` in the
/// kernel, which is cyclic on `t^{div φ_α} − 1`.
pub fn delta0(q: &FiniteQuotient, phi: &CohomologyClass) -> Result<LaurentPoly, AlexanderError> {
    let d = q.div_phi_alpha(phi)?;
    Ok((&LaurentPoly::monomial(1, d as i64) - &LaurentPoly::one()).normalize())
}

/// `det(t^a P − I)` from the cycle type of `P = L(α(x_j))`, `a = φ(x_j)`:
/// each `k`-cycle contributes `(−1)^{k+1}(t^{ak} − 1)`.
pub fn wada_denominator(q: &FiniteQuotient, phi: &CohomologyClass, j: usize) -> LaurentPoly {
    let a = phi.images[j];
    let perm = q.left_action(q.generator_element(j));
    let mut seen = vec![false; perm.len()];
    let mut out = LaurentPoly::one();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut k = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            k += 1;
        }
        let factor = &LaurentPoly::monomial(1, a * k) - &LaurentPoly::one();
        out = &out * &if k % 2 == 0 { -factor } else { factor };
    }
    out
}

/// Whether the first twisted homology has positive rank, i.e. the Fox
/// matrix has rank below `(g − 1)·|G|` over `ℚ(t)`.
pub fn vanishing_test(pres: &Presentation, q: &FiniteQuotient, phi: &CohomologyClass) -> bool {
    let target = (pres.generator_count() - 1) * q.order();
    fox_matrix(pres, q, phi).rank_over_fraction_field() < target
}

/// Computes with the default column.
pub fn twisted_alexander(
    pres: &Presentation,
    q: &FiniteQuotient,
    phi: &CohomologyClass,
) -> Result<TwistedAlexanderResult, AlexanderError> {
    let j = default_column(phi).ok_or(AlexanderError::Class(PresentationError::TrivialClass))?;
    twisted_alexander_with_column(pres, q, phi, j)
}

/// Computes deleting column block `j` (0-based), which must have
/// `φ(x_j) ≠ 0`.
pub fn twisted_alexander_with_column(
    pres: &Presentation,
    q: &FiniteQuotient,
    phi: &CohomologyClass,
    j: usize,
) -> Result<TwistedAlexanderResult, AlexanderError> {
    if pres.deficiency() != 1 {
        return Err(AlexanderError::DeficiencyNotOne(pres.deficiency()));
    }
    pres.validate_class(phi)?;
    if phi.images.get(j).copied().unwrap_or(0) == 0 {
        return Err(AlexanderError::InadmissibleColumn(j + 1));
    }
    let n = q.order();
    let fox = fox_matrix(pres, q, phi);
    let vanishing = fox.rank_over_fraction_field() < (pres.generator_count() - 1) * n;
    let a_j = fox.delete_columns(j * n, n);
    let wada_num = a_j.det()?;
    let wada_den = wada_denominator(q, phi, j);
    let d0 = delta0(q, phi)?;
    let div_phi_alpha = q.div_phi_alpha(phi)?;
    if vanishing != wada_num.is_zero() {
        return Err(AlexanderError::InternalInconsistency(format!(
            "rank test says vanishing={vanishing} but det(A_j) is {wada_num}"
        )));
    }
    let delta1 = if vanishing {
        LaurentPoly::zero()
    } else {
        (&wada_num * &d0)
            .exact_div_integral(&wada_den)
            .map_err(|e| AlexanderError::InternalInconsistency(format!("Wada quotient: {e}")))?
            .normalize()
    };
    let (monic, degree) = if delta1.is_zero() {
        (None, None)
    } else {
        (delta1.is_monic().ok(), delta1.degree().ok())
    };
    Ok(TwistedAlexanderResult {
        delta1,
        vanishing,
        delta0: d0,
        wada_num,
        wada_den,
        column_used: j + 1,
        quotient_order: n,
        div_phi_alpha,
        monic,
        degree,
    })
}

/// `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for m in i + 1..k {
            cur[m] = cur[m - 1] + 1;
        }
    }
}

/// Order of the module presented by `m` (one relation per row): the
/// normalized gcd of all `cols × cols` minors, by brute force. Zero when
/// there are fewer rows than columns.
pub fn order_by_minors(m: &LaurentMatrix) -> LaurentPoly {
    let k = m.cols();
    let all_cols: Vec<usize> = (0..k).collect();
    // zero rows and repeated rows cannot contribute a nonzero minor
    let mut seen = std::collections::HashSet::new();
    let live: Vec<usize> = (0..m.rows())
        .filter(|&i| {
            let row: Vec<&LaurentPoly> = (0..k).map(|c| m.get(i, c)).collect();
            row.iter().any(|p| !p.is_zero()) && seen.insert(row)
        })
        .collect();
    if live.len() < k {
        return LaurentPoly::zero();
    }
    subsets(live.len(), k)
        .par_iter()
        .map(|s| {
            let pick: Vec<usize> = s.iter().map(|&i| live[i]).collect();
            m.submatrix(&pick, &all_cols).det().expect("square minor")
        })
        .reduce(LaurentPoly::zero, |a, b| a.gcd(&b))
        .normalize()
}

/// Independent route to `Δ₁`: brute-force minor gcds for the deleted-column
/// matrices and for the zeroth homology, a direct determinant for
/// `E(x_j) − I`, combined over every admissible column. Meant for small
/// cases only. With fewer than `g − 1` relators the result is zero.
pub fn delta1_via_minor_gcd(
    pres: &Presentation,
    q: &FiniteQuotient,
    phi: &CohomologyClass,
) -> Result<LaurentPoly, AlexanderError> {
    let g = pres.generator_count();
    pres.validate_class(phi)?;
    let n = q.order();
    let blocks: Vec<LaurentMatrix> = (0..g).map(|j| generator_minus_identity(q, phi, j)).collect();
    let d0 = order_by_minors(&LaurentMatrix::vstack(&blocks));
    let fox = fox_matrix(pres, q, phi);
    let mut acc: Option<LaurentPoly> = None;
    for (j, block) in blocks.iter().enumerate() {
        if phi.images[j] == 0 {
            continue;
        }
        let den = block.det_bareiss()?;
        let num = order_by_minors(&fox.delete_columns(j * n, n));
        let candidate = (&num * &d0)
            .exact_div_integral(&den)
            .map_err(|e| AlexanderError::InternalInconsistency(format!("column {}: {e}", j + 1)))?;
        acc = Some(match acc {
            None => candidate,
            Some(prev) => prev.gcd(&candidate),
        });
    }
    acc.map(|p| p.normalize()).ok_or(AlexanderError::NoAdmissibleColumn)
}

/// Equality up to the units `±t^k`.
pub fn same_up_to_units(a: &LaurentPoly, b: &LaurentPoly) -> bool {
    a.normalize() == b.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{parse_presentation, wirtinger_from_pd};
    use crate::quotients::{enumerate_quotients, EnumerationOptions};

    pub(crate) const TREFOIL_PD: &[[i64; 4]] = &[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]];
    pub(crate) const FIGURE_EIGHT_PD: &[[i64; 4]] = &[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]];
    pub(crate) const K52_PD: &[[i64; 4]] = &[[1, 5, 2, 4], [3, 9, 4, 8], [5, 1, 6, 10], [7, 3, 8, 2], [9, 7, 10, 6]];

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    /// `det(V − t·Vᵀ)` for a 2×2 Seifert matrix.
    fn seifert(v: [[i64; 2]; 2]) -> LaurentPoly {
        let t = LaurentPoly::t();
        let rows = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| &LaurentPoly::constant(v[i][j]) - &(&t * &LaurentPoly::constant(v[j][i])))
                    .collect()
            })
            .collect();
        LaurentMatrix::from_rows(rows).det_bareiss().unwrap().normalize()
    }

    fn trivial_delta(pres: &Presentation) -> TwistedAlexanderResult {
        let phi = pres.primitive_class().unwrap();
        twisted_alexander(pres, &FiniteQuotient::trivial(pres.generator_count()), &phi).unwrap()
    }

    #[test]
    fn classical_knots() {
        let trefoil2 = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let r = trivial_delta(&trefoil2);
        assert_eq!(r.delta1, p("t^2 - t + 1"));
        assert_eq!(r.delta0, p("t - 1"));
        assert_eq!((r.monic, r.degree, r.vanishing), (Some(true), Some(2), false));

        let cases = [
            (TREFOIL_PD, [[-1, 1], [0, -1]]),
            (FIGURE_EIGHT_PD, [[1, 1], [0, -1]]),
            (K52_PD, [[2, 1], [0, 1]]),
        ];
        for (pd, v) in cases {
            let pres = wirtinger_from_pd(pd).unwrap();
            assert_eq!(trivial_delta(&pres).delta1, seifert(v), "{pd:?}");
        }
        assert_eq!(seifert([[2, 1], [0, 1]]), p("2t^2 - 3t + 2"));
        assert_eq!(trivial_delta(&wirtinger_from_pd(K52_PD).unwrap()).monic, Some(false));
    }

    #[test]
    fn torus_group() {
        let t2 = parse_presentation("gens: x y\nrel: x y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 0]);
        let q = FiniteQuotient::trivial(2);
        let r = twisted_alexander(&t2, &q, &phi).unwrap();
        assert_eq!(r.delta1, p("t - 1"));
        assert_eq!(delta1_via_minor_gcd(&t2, &q, &phi).unwrap(), p("t - 1"));
        assert_eq!(
            twisted_alexander_with_column(&t2, &q, &phi, 1),
            Err(AlexanderError::InadmissibleColumn(2))
        );
    }

    #[test]
    fn preconditions() {
        let f2 = parse_presentation("gens: x y").unwrap();
        let phi = CohomologyClass::new(vec![1, 0]);
        let q = FiniteQuotient::trivial(2);
        assert_eq!(
            twisted_alexander(&f2, &q, &phi),
            Err(AlexanderError::DeficiencyNotOne(2))
        );
        assert!(vanishing_test(&f2, &q, &phi));
        assert_eq!(delta1_via_minor_gcd(&f2, &q, &phi).unwrap(), LaurentPoly::zero());
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        assert!(matches!(
            twisted_alexander(&t, &q, &CohomologyClass::new(vec![0, 0])),
            Err(AlexanderError::Class(PresentationError::TrivialClass))
        ));
        assert!(!vanishing_test(&t, &q, &CohomologyClass::new(vec![1, 1])));
        let z = parse_presentation("gens: x").unwrap();
        let q1 = FiniteQuotient::trivial(1);
        assert!(!vanishing_test(&z, &q1, &CohomologyClass::new(vec![1])));
        assert_eq!(
            twisted_alexander(&z, &q1, &CohomologyClass::new(vec![1]))
                .unwrap()
                .delta1,
            LaurentPoly::one()
        );
    }

    #[test]
    fn delta0_examples() {
        let q1 = FiniteQuotient::trivial(1);
        assert_eq!(delta0(&q1, &CohomologyClass::new(vec![2])).unwrap(), p("t^2 - 1"));
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 1]);
        let opts = EnumerationOptions {
            max_degree: 3,
            ..Default::default()
        };
        for q in enumerate_quotients(&t, &opts).quotients {
            let blocks: Vec<_> = (0..2).map(|j| generator_minus_identity(&q, &phi, j)).collect();
            let by_minors = order_by_minors(&LaurentMatrix::vstack(&blocks));
            assert_eq!(delta0(&q, &phi).unwrap(), by_minors);
            for (j, b) in blocks.iter().enumerate() {
                let direct = b.det_bareiss().unwrap();
                assert_eq!(wada_denominator(&q, &phi, j), direct);
                assert!(by_minors.divides(&direct));
            }
        }
    }

    #[test]
    fn oracle_and_columns_agree_on_small_quotients() {
        let opts = EnumerationOptions {
            max_degree: 4,
            max_order: 6,
            ..Default::default()
        };
        for pres in [
            parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap(),
            wirtinger_from_pd(TREFOIL_PD).unwrap(),
        ] {
            let phi = pres.primitive_class().unwrap();
            for q in enumerate_quotients(&pres, &opts).quotients {
                let r = twisted_alexander(&pres, &q, &phi).unwrap();
                assert_eq!(delta1_via_minor_gcd(&pres, &q, &phi).unwrap(), r.delta1);
                for j in 1..pres.generator_count() {
                    let other = twisted_alexander_with_column(&pres, &q, &phi, j).unwrap();
                    assert_eq!(other.delta1, r.delta1);
                }
            }
        }
    }

    #[test]
    fn result_json_round_trip() {
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let r = trivial_delta(&t);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"delta1\":\"t^2 - t + 1\""));
        let back: TwistedAlexanderResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
