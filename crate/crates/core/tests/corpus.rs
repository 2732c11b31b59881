mod common;

use common::*;
use fibercheck::alexander::{twisted_alexander, vanishing_test};
use fibercheck::fibering::{run_corpus, AnalysisOptions, CorpusOutcome, Overall};
use fibercheck::presentation::CorpusLabel;
use fibercheck::quotients::{enumerate_quotients, EnumerationOptions, FiniteQuotient};
use num_rational::Ratio;

fn opts(max_degree: usize, max_order: usize) -> EnumerationOptions {
    EnumerationOptions {
        max_degree,
        max_order,
        budget_nodes: 10_000_000,
    }
}

fn trivial_delta(file: &str) -> Vec<i128> {
    let (pres, phi) = load(file);
    let q = FiniteQuotient::trivial(pres.generator_count());
    canonical(&to_poly(&twisted_alexander(&pres, &q, &phi).unwrap().delta1))
}

/// Seifert matrix of the `(2, n)` torus knot: `−1` on the diagonal, `1` just
/// above it.
fn torus_seifert(n: usize) -> Vec<Vec<i64>> {
    (0..n - 1)
        .map(|i| {
            (0..n - 1)
                .map(|j| {
                    if i == j {
                        -1
                    } else if j == i + 1 {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn every_corpus_file_parses() {
    let mut n = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "pres") {
            let f = load_file(path.file_name().unwrap().to_str().unwrap());
            f.class().unwrap();
            assert_ne!(f.metadata.label, CorpusLabel::Unknown, "{}", path.display());
            n += 1;
        }
    }
    assert!(n >= 10);
}

#[test]
fn trivial_quotient_matches_seifert_oracles() {
    let cases: &[(&[&str], Vec<Vec<i64>>)] = &[
        (&["trefoil.pres", "trefoil_2gen.pres"], torus_seifert(3)),
        (
            &["figure_eight.pres", "figure_eight_2gen.pres"],
            vec![vec![-1, 1], vec![0, 1]],
        ),
        (&["k5_2.pres", "k5_2_2gen.pres"], vec![vec![-2, 1], vec![0, -1]]),
        (&["k5_1.pres", "torus_2_5.pres"], torus_seifert(5)),
        (&["k6_1.pres"], vec![vec![-1, 1], vec![0, 2]]),
    ];
    for (files, v) in cases {
        let oracle = seifert_alexander(v);
        for file in *files {
            assert_eq!(trivial_delta(file), oracle, "{file}");
        }
    }
    assert_eq!(seifert_alexander(&torus_seifert(5)), vec![1, -1, 1, -1, 1]);
    assert_eq!(seifert_alexander(&[vec![-1, 1], vec![0, 2]]), vec![2, -5, 2]);
}

#[test]
fn non_knot_examples() {
    // annulus × ℝ is the infinite cyclic cover; its H₁ is ℤ[t^±1]/(t − 1)
    assert_eq!(trivial_delta("torus_interval.pres"), vec![-1, 1]);
    // the ℤ/2 summand contributes a constant factor 2
    let trefoil = seifert_alexander(&torus_seifert(3));
    assert_eq!(
        trivial_delta("trefoil_rp3.pres"),
        trefoil.iter().map(|c| 2 * c).collect::<Vec<_>>()
    );
    let (free, phi) = load("free2.pres");
    assert!(vanishing_test(&free, &FiniteQuotient::trivial(2), &phi));
}

/// `∏_{ζⁿ = 1} Δ(ζt)` for `Δ = c₂t² + c₁t + c₀`: with roots `r₁, r₂` this is
/// `c₂ⁿ (t²ⁿ − (r₁ⁿ + r₂ⁿ) tⁿ + (r₁r₂)ⁿ)`, from the power-sum recurrence.
fn cyclic_product(delta: &[i128], n: usize) -> Vec<i128> {
    let (c0, c1, c2) = (delta[0], delta[1], delta[2]);
    let s = Ratio::new(-c1, c2);
    let e = Ratio::new(c0, c2);
    let mut p = [Ratio::from_integer(2), s];
    for _ in 1..n {
        p = [p[1], s * p[1] - e * p[0]];
    }
    let pn = if n == 0 { p[0] } else { p[1] };
    let lead = Ratio::from_integer(c2.pow(n as u32));
    let mut out = vec![0i128; 2 * n + 1];
    out[2 * n] = c2.pow(n as u32);
    let mid = lead * pn;
    let low = lead * e.pow(n as i32);
    assert!(mid.is_integer() && low.is_integer());
    out[n] -= mid.to_integer();
    out[0] += low.to_integer();
    let poly: Poly = out
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, &c)| (i as i64, c))
        .collect();
    canonical(&poly)
}

fn is_abelian(q: &FiniteQuotient) -> bool {
    (0..q.order()).all(|a| (0..q.order()).all(|b| q.mul(a, b) == q.mul(b, a)))
}

#[test]
fn cyclic_quotients_match_root_products() {
    let mut checked = 0;
    for file in ["trefoil.pres", "figure_eight_2gen.pres", "k5_2_2gen.pres", "k6_1.pres"] {
        let (pres, phi) = load(file);
        let delta = trivial_delta(file);
        for q in enumerate_quotients(&pres, &opts(6, 6))
            .quotients
            .iter()
            .filter(|q| is_abelian(q))
        {
            let got = canonical(&to_poly(&twisted_alexander(&pres, q, &phi).unwrap().delta1));
            assert_eq!(got, cyclic_product(&delta, q.order()), "{file} |G|={}", q.order());
            checked += 1;
        }
    }
    assert!(checked >= 20, "{checked}");
}

#[test]
fn figure_eight_quotient_table() {
    let (pres, phi) = load("figure_eight.pres");
    let qs = enumerate_quotients(&pres, &opts(4, 24)).quotients;
    let orders: Vec<usize> = qs.iter().map(|q| q.order()).collect();
    assert_eq!(orders, vec![1, 2, 3, 4, 12]);
    let want: [&[i128]; 4] = [
        &[1, -3, 1],
        &[1, 0, -7, 0, 1],
        &[1, 0, 0, -18, 0, 0, 1],
        &[1, 0, 0, 0, -47, 0, 0, 0, 1],
    ];
    for (q, w) in qs.iter().zip(want) {
        let r = twisted_alexander(&pres, q, &phi).unwrap();
        assert_eq!(canonical(&to_poly(&r.delta1)), w.to_vec());
    }
    let a4 = twisted_alexander(&pres, &qs[4], &phi).unwrap();
    assert_eq!(a4.div_phi_alpha, 3);
    assert_eq!(a4.degree, Some(15));
    assert_eq!(a4.monic, Some(true));
}

#[test]
fn corpus_run_respects_labels() {
    let run = run_corpus(
        &corpus_dir(),
        &AnalysisOptions {
            enumeration: opts(3, 24),
            cache_path: None,
        },
    )
    .unwrap();
    assert_eq!(run.contradictions(), 0);
    for entry in &run.entries {
        let CorpusOutcome::Report(report) = &entry.outcome else {
            panic!("{}: {:?}", entry.file, entry.outcome);
        };
        let verdict = report.overall.name();
        match entry.file.as_str() {
            "k5_2.pres" | "k5_2_2gen.pres" | "k6_1.pres" => {
                assert_eq!(
                    report.overall,
                    Overall::ObstructedNonmonic { quotient_index: 0 },
                    "{}",
                    entry.file
                )
            }
            "free2.pres" => assert_eq!(
                report.overall,
                Overall::VanishingFound {
                    quotient_index: 0,
                    order: 1
                }
            ),
            "trefoil_rp3.pres" => assert_eq!(
                report.overall,
                Overall::VanishingFound {
                    quotient_index: 1,
                    order: 2
                }
            ),
            _ => {
                assert_eq!(entry.label, CorpusLabel::Fibered, "{}", entry.file);
                assert_eq!(verdict, "CONSISTENT_WITH_FIBERED", "{}", entry.file);
            }
        }
    }
}
