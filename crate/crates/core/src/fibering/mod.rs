//! Fibering criteria across enumerated quotients.
//!
//! A finite search can refute fiberedness (a vanishing, non-monic or
//! wrong-degree polynomial) but never certify it, so the strongest positive
//! outcome is "consistent with fibered" up to the searched bounds.

mod corpus;

pub use corpus::{run_corpus, CorpusEntry, CorpusOutcome, CorpusRun};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alexander::{twisted_alexander, vanishing_test, AlexanderError, TwistedAlexanderResult};
use crate::presentation::{CohomologyClass, Presentation};
use crate::quotients::{
    enumerate_cached, enumerate_quotients, Enumeration, EnumerationOptions, FiniteQuotient, QuotientDescriptor,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuotientVerdict {
    Vanishes,
    Nonmonic,
    WrongDegree,
    Passes,
    /// Not vanishing; degree and monicness not defined for this
    /// presentation.
    DeficiencyNotOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBound {
    pub max_degree: usize,
    pub max_order: usize,
    pub quotients_checked: usize,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Overall {
    VanishingFound { quotient_index: usize, order: usize },
    ObstructedNonmonic { quotient_index: usize },
    ObstructedDegree { quotient_index: usize },
    ConsistentWithFibered { bound: SearchBound },
    Inconclusive { bound: SearchBound },
}

impl Overall {
    pub fn name(&self) -> &'static str {
        match self {
            Overall::VanishingFound { .. } => "VANISHING_FOUND",
            Overall::ObstructedNonmonic { .. } => "OBSTRUCTED_NONMONIC",
            Overall::ObstructedDegree { .. } => "OBSTRUCTED_DEGREE",
            Overall::ConsistentWithFibered { .. } => "CONSISTENT_WITH_FIBERED",
            Overall::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    /// Whether the outcome rules out fiberedness of the class.
    pub fn is_obstruction(&self) -> bool {
        matches!(
            self,
            Overall::VanishingFound { .. } | Overall::ObstructedNonmonic { .. } | Overall::ObstructedDegree { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub vanishing: bool,
    /// Present for deficiency-one presentations.
    pub result: Option<TwistedAlexanderResult>,
    pub expected_degree: Option<i64>,
    pub verdict: QuotientVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientCheck {
    pub index: usize,
    pub quotient: QuotientDescriptor,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormEstimate {
    /// `max (deg Δ^α − (1 + b₃)·div φ_α) / |G|` over nonvanishing results.
    pub value: String,
    pub quotient_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberingReport {
    pub schema: u32,
    pub name: String,
    pub phi: CohomologyClass,
    pub thurston_norm_input: Option<u64>,
    pub b3: u32,
    pub deficiency: i64,
    pub budget_nodes: u64,
    pub search_nodes: u64,
    pub per_quotient: Vec<QuotientCheck>,
    pub overall: Overall,
    /// Degree-based estimate, not a proven bound.
    pub norm_lower_bound: Option<NormEstimate>,
}

#[derive(Clone, Debug, Default)]
pub struct AnalysisOptions {
    pub enumeration: EnumerationOptions,
    pub cache_path: Option<std::path::PathBuf>,
}

/// `|G|·‖φ‖_T + (1 + b₃)·div φ_α`.
pub fn expected_degree(order: usize, norm: u64, b3: u32, div_phi_alpha: u64) -> i64 {
    order as i64 * norm as i64 + (1 + b3 as i64) * div_phi_alpha as i64
}

/// Verdict for one quotient, with the polynomial when it is defined.
pub fn check_quotient(
    pres: &Presentation,
    phi: &CohomologyClass,
    q: &FiniteQuotient,
    norm: Option<u64>,
    b3: u32,
) -> Result<Check, AlexanderError> {
    if pres.deficiency() != 1 {
        pres.validate_class(phi)?;
        let vanishing = vanishing_test(pres, q, phi);
        let verdict = if vanishing {
            QuotientVerdict::Vanishes
        } else {
            QuotientVerdict::DeficiencyNotOne
        };
        return Ok(Check {
            vanishing,
            result: None,
            expected_degree: None,
            verdict,
        });
    }
    let r = twisted_alexander(pres, q, phi)?;
    let expected = norm.map(|n| expected_degree(r.quotient_order, n, b3, r.div_phi_alpha));
    let verdict = if r.vanishing {
        QuotientVerdict::Vanishes
    } else if r.monic != Some(true) {
        QuotientVerdict::Nonmonic
    } else if expected.is_some_and(|e| r.degree != Some(e)) {
        QuotientVerdict::WrongDegree
    } else {
        QuotientVerdict::Passes
    };
    Ok(Check {
        vanishing: r.vanishing,
        result: Some(r),
        expected_degree: expected,
        verdict,
    })
}

/// The degree-based estimate over the nonvanishing results, or `None` if
/// every result vanishes.
pub fn norm_lower_bound(results: &[TwistedAlexanderResult], b3: u32) -> Option<(Ratio<i64>, usize)> {
    let mut best: Option<(Ratio<i64>, usize)> = None;
    for (i, r) in results.iter().enumerate() {
        let Some(deg) = r.degree else { continue };
        let est = Ratio::new(deg - (1 + b3 as i64) * r.div_phi_alpha as i64, r.quotient_order as i64);
        if best.as_ref().is_none_or(|(b, _)| est > *b) {
            best = Some((est, i));
        }
    }
    best
}

fn enumerate(pres: &Presentation, opts: &AnalysisOptions) -> Enumeration {
    match &opts.cache_path {
        Some(path) => enumerate_cached(pres, &opts.enumeration, path),
        None => enumerate_quotients(pres, &opts.enumeration),
    }
}

/// Checks every enumerated quotient and aggregates a verdict. Runs on the
/// current rayon pool; output does not depend on its size.
pub fn analyze(
    pres: &Presentation,
    phi: &CohomologyClass,
    norm: Option<u64>,
    opts: &AnalysisOptions,
) -> Result<FiberingReport, AlexanderError> {
    pres.validate_class(phi)?;
    let e = enumerate(pres, opts);
    analyze_quotients(pres, phi, norm, &e, opts)
}

pub fn analyze_quotients(
    pres: &Presentation,
    phi: &CohomologyClass,
    norm: Option<u64>,
    e: &Enumeration,
    opts: &AnalysisOptions,
) -> Result<FiberingReport, AlexanderError> {
    let b3 = pres.b3();
    let per_quotient: Vec<QuotientCheck> = e
        .quotients
        .par_iter()
        .enumerate()
        .map(|(index, q)| {
            Ok(QuotientCheck {
                index,
                quotient: q.descriptor(),
                check: check_quotient(pres, phi, q, norm, b3)?,
            })
        })
        .collect::<Result<_, AlexanderError>>()?;

    let first = |v: QuotientVerdict| per_quotient.iter().find(|c| c.check.verdict == v);
    let bound = SearchBound {
        max_degree: opts.enumeration.max_degree,
        max_order: opts.enumeration.max_order,
        quotients_checked: per_quotient.len(),
        truncated: e.truncated,
    };
    let overall = if let Some(c) = first(QuotientVerdict::Vanishes) {
        Overall::VanishingFound {
            quotient_index: c.index,
            order: c.quotient.order,
        }
    } else if let Some(c) = first(QuotientVerdict::Nonmonic) {
        Overall::ObstructedNonmonic {
            quotient_index: c.index,
        }
    } else if let Some(c) = first(QuotientVerdict::WrongDegree) {
        Overall::ObstructedDegree {
            quotient_index: c.index,
        }
    } else if e.truncated || pres.deficiency() != 1 {
        Overall::Inconclusive { bound }
    } else {
        Overall::ConsistentWithFibered { bound }
    };

    let results: Vec<TwistedAlexanderResult> = per_quotient.iter().filter_map(|c| c.check.result.clone()).collect();
    let indices: Vec<usize> = per_quotient
        .iter()
        .filter(|c| c.check.result.is_some())
        .map(|c| c.index)
        .collect();
    let norm_lower_bound = norm_lower_bound(&results, b3).map(|(v, i)| NormEstimate {
        value: v.to_string(),
        quotient_index: indices[i],
    });

    Ok(FiberingReport {
        schema: 1,
        name: pres.name.clone(),
        phi: phi.clone(),
        thurston_norm_input: norm,
        b3,
        deficiency: pres.deficiency(),
        budget_nodes: opts.enumeration.budget_nodes,
        search_nodes: e.nodes,
        per_quotient,
        overall,
        norm_lower_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum SearchOutcome {
    Found {
        quotient_index: usize,
        quotient: QuotientDescriptor,
    },
    Exhausted {
        quotients_checked: usize,
        search_nodes: u64,
        truncated: bool,
    },
}

/// First quotient, in enumeration order, whose twisted homology has
/// positive rank.
pub fn search_vanishing(pres: &Presentation, phi: &CohomologyClass, opts: &AnalysisOptions) -> SearchOutcome {
    let e = enumerate(pres, opts);
    search_in(pres, phi, &e)
}

pub fn search_in(pres: &Presentation, phi: &CohomologyClass, e: &Enumeration) -> SearchOutcome {
    match e.quotients.par_iter().position_first(|q| vanishing_test(pres, q, phi)) {
        Some(i) => SearchOutcome::Found {
            quotient_index: i,
            quotient: e.quotients[i].descriptor(),
        },
        None => SearchOutcome::Exhausted {
            quotients_checked: e.quotients.len(),
            search_nodes: e.nodes,
            truncated: e.truncated,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn small(max_degree: usize, max_order: usize) -> AnalysisOptions {
        AnalysisOptions {
            enumeration: EnumerationOptions {
                max_degree,
                max_order,
                budget_nodes: 1_000_000,
            },
            cache_path: None,
        }
    }

    #[test]
    fn check_quotient_examples() {
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 1]);
        let c = check_quotient(&t, &phi, &FiniteQuotient::trivial(2), Some(1), 0).unwrap();
        assert_eq!((c.verdict, c.expected_degree), (QuotientVerdict::Passes, Some(2)));
        let c = check_quotient(&t, &phi, &FiniteQuotient::trivial(2), Some(3), 0).unwrap();
        assert_eq!(c.verdict, QuotientVerdict::WrongDegree);

        // two-bridge form a·w = w·b with w = b a B A b a
        let k52 = parse_presentation("gens: a b\nrel: a b a B A b a B A B a b A B").unwrap();
        let phi52 = k52.primitive_class().unwrap();
        let c = check_quotient(&k52, &phi52, &FiniteQuotient::trivial(2), None, 0).unwrap();
        assert_eq!(c.verdict, QuotientVerdict::Nonmonic);

        let f2 = parse_presentation("gens: x y").unwrap();
        let c = check_quotient(
            &f2,
            &CohomologyClass::new(vec![1, 0]),
            &FiniteQuotient::trivial(2),
            None,
            0,
        )
        .unwrap();
        assert_eq!(c.verdict, QuotientVerdict::Vanishes);
    }

    #[test]
    fn norm_estimates() {
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 1]);
        let r = twisted_alexander(&t, &FiniteQuotient::trivial(2), &phi).unwrap();
        assert_eq!(
            norm_lower_bound(std::slice::from_ref(&r), 0),
            Some((Ratio::from_integer(1), 0))
        );
        let zero = TwistedAlexanderResult {
            delta1: crate::laurent::LaurentPoly::zero(),
            vanishing: true,
            monic: None,
            degree: None,
            ..r
        };
        assert_eq!(norm_lower_bound(&[zero], 0), None);
    }

    #[test]
    fn reports_and_search() {
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 1]);
        let rep = analyze(&t, &phi, Some(1), &small(3, 24)).unwrap();
        assert_eq!(rep.overall.name(), "CONSISTENT_WITH_FIBERED");
        assert_eq!(rep.norm_lower_bound.as_ref().unwrap().value, "1");
        assert!(matches!(
            search_vanishing(&t, &phi, &small(3, 24)),
            SearchOutcome::Exhausted { .. }
        ));

        let f2 = parse_presentation("gens: x y").unwrap();
        let phi = CohomologyClass::new(vec![1, 0]);
        match search_vanishing(&f2, &phi, &small(2, 24)) {
            SearchOutcome::Found {
                quotient_index,
                quotient,
            } => {
                assert_eq!((quotient_index, quotient.order), (0, 1));
            }
            other => panic!("{other:?}"),
        }
        let rep = analyze(&f2, &phi, None, &small(2, 24)).unwrap();
        assert_eq!(
            rep.overall,
            Overall::VanishingFound {
                quotient_index: 0,
                order: 1
            }
        );
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.starts_with("{\"schema\":1,"));
    }
}
