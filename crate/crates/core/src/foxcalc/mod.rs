//! Fox free differential calculus and evaluation through `α ⊗ φ`.
//!
//! A word `w` evaluates to `t^{φ(w)} · L(α(w))`, where `L(g)` is the
//! permutation matrix of left multiplication by `g` on the element list of
//! the quotient.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::presentation::{CohomologyClass, Letter, Presentation, Word};
use crate::quotients::FiniteQuotient;

/// An element of the integral group ring of the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, 1);
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> + '_ {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement {
            terms: self.terms.iter().map(|(w, &c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

/// `∂w/∂x_j` by one left-to-right pass with a running prefix.
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = Word::empty();
    for &l in w.letters() {
        if l.generator == j {
            if l.inverse {
                out.add_term(prefix.push(l), -1);
            } else {
                out.add_term(prefix.clone(), 1);
            }
        }
        prefix = prefix.push(l);
    }
    out
}

/// Sums of signed monomial permutation matrices, kept sparse until the end.
struct Accumulator {
    n: usize,
    entries: Vec<BTreeMap<i64, i64>>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator {
            n,
            entries: vec![BTreeMap::new(); n * n],
        }
    }

    /// Adds `c · t^exp · L(g)`.
    fn add(&mut self, q: &FiniteQuotient, g: usize, exp: i64, c: i64) {
        for (h, &gh) in q.left_action(g).iter().enumerate() {
            *self.entries[gh * self.n + h].entry(exp).or_insert(0) += c;
        }
    }

    fn write_into(self, m: &mut LaurentMatrix, r0: usize, c0: usize) {
        let n = self.n;
        for (k, terms) in self.entries.into_iter().enumerate() {
            let p = LaurentPoly::from_terms(terms.into_iter().filter(|&(_, c)| c != 0));
            m.set(r0 + k / n, c0 + k % n, p);
        }
    }
}

pub fn evaluate(e: &GroupRingElement, q: &FiniteQuotient, phi: &CohomologyClass) -> LaurentMatrix {
    let n = q.order();
    let mut acc = Accumulator::new(n);
    for (w, c) in e.terms() {
        acc.add(q, q.element_of(w), phi.evaluate(w), c);
    }
    let mut m = LaurentMatrix::zeros(n, n);
    acc.write_into(&mut m, 0, 0);
    m
}

pub fn evaluate_word(w: &Word, q: &FiniteQuotient, phi: &CohomologyClass) -> LaurentMatrix {
    evaluate(&GroupRingElement::from_word(w.clone()), q, phi)
}

/// `E(x_j) − I`.
pub fn generator_minus_identity(q: &FiniteQuotient, phi: &CohomologyClass, j: usize) -> LaurentMatrix {
    let n = q.order();
    let mut acc = Accumulator::new(n);
    acc.add(q, q.generator_element(j), phi.images[j], 1);
    acc.add(q, 0, 0, -1);
    let mut m = LaurentMatrix::zeros(n, n);
    acc.write_into(&mut m, 0, 0);
    m
}

/// The `r|G| × g|G|` matrix whose block `(i, j)` is `E(∂r_i/∂x_j)`.
pub fn fox_matrix(pres: &Presentation, q: &FiniteQuotient, phi: &CohomologyClass) -> LaurentMatrix {
    let n = q.order();
    let g = pres.generator_count();
    let mut m = LaurentMatrix::zeros(pres.relators().len() * n, g * n);
    for (i, r) in pres.relators().iter().enumerate() {
        let mut blocks: Vec<Accumulator> = (0..g).map(|_| Accumulator::new(n)).collect();
        // prefix tracked as (element, φ-value) rather than as a word
        let (mut elem, mut exp) = (0usize, 0i64);
        for &l in r.letters() {
            let step = single(l);
            let next_elem = q.element_of(&step);
            let next_exp = exp + l.sign() * phi.images[l.generator];
            if l.inverse {
                blocks[l.generator].add(q, q.mul(elem, next_elem), next_exp, -1);
            } else {
                blocks[l.generator].add(q, elem, exp, 1);
            }
            elem = q.mul(elem, next_elem);
            exp = next_exp;
        }
        for (j, acc) in blocks.into_iter().enumerate() {
            acc.write_into(&mut m, i * n, j * n);
        }
    }
    m
}

fn single(l: Letter) -> Word {
    Word::new([l])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::quotients::{enumerate_quotients, EnumerationOptions};
    use proptest::prelude::*;

    fn w(s: &[i32]) -> Word {
        Word::from_signed(s)
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(fox_derivative(&w(&[1, 2]), 0), GroupRingElement::one());
        assert_eq!(fox_derivative(&w(&[1, 2]), 1), GroupRingElement::from_word(w(&[1])));
        let mut minus_xinv = GroupRingElement::zero();
        minus_xinv.add_term(w(&[-1]), -1);
        assert_eq!(fox_derivative(&w(&[-1]), 0), minus_xinv);
        assert!(fox_derivative(&w(&[2, 2]), 0).is_zero());
    }

    #[test]
    fn evaluate_examples() {
        let z = parse_presentation("gens: x").unwrap();
        let phi = CohomologyClass::new(vec![1]);
        let triv = FiniteQuotient::trivial(1);
        assert_eq!(
            evaluate(&GroupRingElement::one(), &triv, &phi),
            LaurentMatrix::identity(1)
        );
        assert_eq!(evaluate_word(&w(&[1]), &triv, &phi).get(0, 0), &LaurentPoly::t());

        let q2 = FiniteQuotient::from_permutations(&z, vec![vec![1, 0]]).unwrap();
        let x_minus_1 = &GroupRingElement::from_word(w(&[1])) - &GroupRingElement::one();
        let m = evaluate(&x_minus_1, &q2, &phi);
        let t = LaurentPoly::t;
        let neg1 = || LaurentPoly::constant(-1);
        assert_eq!(m, LaurentMatrix::from_rows(vec![vec![neg1(), t()], vec![t(), neg1()]]));
        assert_eq!(generator_minus_identity(&q2, &phi, 0), m);
    }

    #[test]
    fn fox_matrix_examples() {
        let f2 = parse_presentation("gens: x y").unwrap();
        let phi = CohomologyClass::new(vec![1, 0]);
        let m = fox_matrix(&f2, &FiniteQuotient::trivial(2), &phi);
        assert_eq!((m.rows(), m.cols()), (0, 2));

        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 1]);
        let m = fox_matrix(&t, &FiniteQuotient::trivial(2), &phi);
        assert_eq!((m.rows(), m.cols()), (1, 2));
        let alex: LaurentPoly = "t^2 - t + 1".parse().unwrap();
        assert_eq!(m.get(0, 0).normalize(), alex);
        assert_eq!(m.get(0, 1).normalize(), alex);
    }

    #[test]
    fn fox_matrix_matches_generic_evaluation() {
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y").unwrap();
        let phi = CohomologyClass::new(vec![1, 1]);
        let opts = EnumerationOptions {
            max_degree: 3,
            ..Default::default()
        };
        for q in enumerate_quotients(&t, &opts).quotients {
            let m = fox_matrix(&t, &q, &phi);
            let n = q.order();
            for j in 0..2 {
                let block = evaluate(&fox_derivative(&t.relators()[0], j), &q, &phi);
                assert_eq!(m.block(0, j * n, n, n), block);
            }
        }
    }

    fn letters() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(
            (1i32..=3, any::<bool>()).prop_map(|(g, n)| if n { -g } else { g }),
            0..12,
        )
    }

    proptest! {
        #[test]
        fn product_rule_and_fundamental_formula(u in letters(), v in letters()) {
            let (u, v) = (w(&u), w(&v));
            let uv = u.concat(&v);
            for j in 0..3 {
                let lhs = fox_derivative(&uv, j);
                let rhs = &fox_derivative(&u, j)
                    + &(&GroupRingElement::from_word(u.clone()) * &fox_derivative(&v, j));
                prop_assert_eq!(lhs, rhs);
            }
            // Σ_j (∂w/∂x_j)(x_j − 1) = w − 1 in the free group ring
            let mut sum = GroupRingElement::zero();
            for j in 0..3 {
                let xj = &GroupRingElement::from_word(Word::generator(j)) - &GroupRingElement::one();
                sum = &sum + &(&fox_derivative(&uv, j) * &xj);
            }
            prop_assert_eq!(sum, &GroupRingElement::from_word(uv.clone()) - &GroupRingElement::one());
        }
    }
}
