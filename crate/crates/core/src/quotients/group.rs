use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::QuotientError;
use crate::presentation::{CohomologyClass, Letter, Presentation, Word};

/// An epimorphism from a finitely presented group onto a finite group,
/// realised by a transitive permutation action.
///
/// Group elements are numbered by breadth-first closure from the identity
/// under right multiplication by the generator images, so the numbering
/// (and the right regular table) depends only on the kernel.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    degree: usize,
    generator_perms: Vec<Vec<usize>>,
    /// `right[e][j] = e · α(x_j)`.
    right: Vec<Vec<usize>>,
    right_inv: Vec<Vec<usize>>,
    /// Generator-index word reaching each element along the closure tree.
    transversal: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

/// Serializable summary: degree, order, and 1-based generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDescriptor {
    pub degree: usize,
    pub order: usize,
    pub generator_perms: Vec<Vec<usize>>,
}

/// Elements of the image group by breadth-first closure, with the right
/// regular table. Cheap next to the multiplication table, so kernels can be
/// compared before committing to a full quotient.
pub(crate) struct Closure {
    right: Vec<Vec<usize>>,
    transversal: Vec<Vec<usize>>,
}

impl Closure {
    pub(crate) fn compute(generator_perms: &[Vec<usize>], cap: usize) -> Option<Self> {
        let degree = generator_perms.first().map_or(1, |p| p.len());
        let identity: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut elements = vec![identity.clone()];
        let mut transversal = vec![Vec::new()];
        let mut right: Vec<Vec<usize>> = Vec::new();
        index.insert(identity, 0);
        let mut e = 0;
        while e < elements.len() {
            let mut row = Vec::with_capacity(generator_perms.len());
            for (j, p) in generator_perms.iter().enumerate() {
                // "e then x_j": composite sends point a to p[e[a]]
                let prod: Vec<usize> = elements[e].iter().map(|&a| p[a]).collect();
                let next = elements.len();
                let k = *index.entry(prod.clone()).or_insert(next);
                if k == next {
                    if next >= cap {
                        return None;
                    }
                    elements.push(prod);
                    let mut w = transversal[e].clone();
                    w.push(j);
                    transversal.push(w);
                }
                row.push(k);
            }
            right.push(row);
            e += 1;
        }
        Some(Closure { right, transversal })
    }

    pub(crate) fn key(&self) -> Vec<usize> {
        self.right.concat()
    }

    pub(crate) fn finish(self, generator_perms: Vec<Vec<usize>>) -> FiniteQuotient {
        let Closure { right, transversal } = self;
        let degree = generator_perms.first().map_or(1, |p| p.len());
        let g = generator_perms.len();
        let n = right.len();
        let mul: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                transversal
                    .iter()
                    .map(|w| w.iter().fold(a, |x, &j| right[x][j]))
                    .collect()
            })
            .collect();
        let inv: Vec<usize> = (0..n)
            .map(|a| mul[a].iter().position(|&b| b == 0).expect("group has inverses"))
            .collect();
        let right_inv = (0..n)
            .map(|a| (0..g).map(|j| mul[a][inv[right[0][j]]]).collect())
            .collect();
        FiniteQuotient {
            degree,
            generator_perms,
            right,
            right_inv,
            transversal,
            mul,
            inv,
        }
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl FiniteQuotient {
    /// Builds from 0-based permutations assumed to satisfy the relators and
    /// act transitively. Returns `None` if the image has more than `cap`
    /// elements.
    pub(crate) fn build(generator_perms: Vec<Vec<usize>>, cap: usize) -> Option<Self> {
        Closure::compute(&generator_perms, cap).map(|c| c.finish(generator_perms))
    }

    /// Validates 0-based permutations against `pres` and builds the
    /// quotient.
    pub fn from_permutations(pres: &Presentation, perms: Vec<Vec<usize>>) -> Result<Self, QuotientError> {
        if perms.len() != pres.generator_count() {
            return Err(QuotientError::WrongCount {
                expected: pres.generator_count(),
                got: perms.len(),
            });
        }
        let degree = perms[0].len();
        if degree == 0 || perms.iter().any(|p| p.len() != degree || !is_permutation(p)) {
            return Err(QuotientError::InvalidPermutation);
        }
        for (i, r) in pres.relators().iter().enumerate() {
            if (0..degree).any(|c| act(&perms, c, r) != c) {
                return Err(QuotientError::RelatorNotTrivial(i + 1));
            }
        }
        let mut seen = vec![false; degree];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for p in &perms {
                if !std::mem::replace(&mut seen[p[c]], true) {
                    queue.push_back(p[c]);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(QuotientError::NotTransitive);
        }
        Ok(Self::build(perms, usize::MAX).expect("uncapped"))
    }

    /// The quotient onto the trivial group.
    pub fn trivial(generator_count: usize) -> Self {
        Self::build(vec![vec![0]; generator_count], 1).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_perms.len()
    }

    /// 0-based images of the generators.
    pub fn generator_perms(&self) -> &[Vec<usize>] {
        &self.generator_perms
    }

    /// `degree × 2g` action table; column `2j` is `x_j`, `2j+1` is `x_j⁻¹`.
    pub fn coset_table(&self) -> Vec<Vec<usize>> {
        let inverses: Vec<Vec<usize>> = self
            .generator_perms
            .iter()
            .map(|p| {
                let mut q = vec![0; p.len()];
                for (a, &b) in p.iter().enumerate() {
                    q[b] = a;
                }
                q
            })
            .collect();
        (0..self.degree)
            .map(|c| {
                self.generator_perms
                    .iter()
                    .zip(&inverses)
                    .flat_map(|(p, q)| [p[c], q[c]])
                    .collect()
            })
            .collect()
    }

    /// Right regular table `e ↦ e·α(x_j)`, the canonical form of the kernel.
    pub fn regular_table(&self) -> &[Vec<usize>] {
        &self.right
    }

    pub(crate) fn key(&self) -> Vec<usize> {
        self.right.concat()
    }

    /// `mul(a, b)` is the product `a·b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Element index of `α(x_j)`.
    pub fn generator_element(&self, j: usize) -> usize {
        self.right[0][j]
    }

    pub fn element_of(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |e, l| self.step(e, *l))
    }

    fn step(&self, e: usize, l: Letter) -> usize {
        if l.inverse {
            self.right_inv[e][l.generator]
        } else {
            self.right[e][l.generator]
        }
    }

    /// Element `g`'s left-multiplication permutation `h ↦ g·h`.
    pub fn left_action(&self, g: usize) -> &[usize] {
        &self.mul[g]
    }

    /// Permutation matrix of left multiplication by `α(x_j)`: entry
    /// `[g·h][h] = 1`.
    pub fn regular_representation(&self, j: usize) -> Vec<Vec<u8>> {
        let n = self.order();
        let g = self.generator_element(j);
        let mut m = vec![vec![0u8; n]; n];
        for h in 0..n {
            m[self.mul[g][h]][h] = 1;
        }
        m
    }

    /// Generators `r(e)·x_j·r(e·x_j)⁻¹` of `ker α`, nontrivial ones only.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let rep = |e: usize| Word::new(self.transversal[e].iter().map(|&j| Letter::new(j, false)));
        let mut out = Vec::new();
        for e in 0..self.order() {
            for j in 0..self.generator_count() {
                let w = rep(e)
                    .push(Letter::new(j, false))
                    .concat(&rep(self.right[e][j]).inverse());
                if !w.is_empty() {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Positive generator of `φ(ker α) ⊆ ℤ`.
    pub fn div_phi_alpha(&self, phi: &CohomologyClass) -> Result<u64, QuotientError> {
        let d = self
            .schreier_generators()
            .iter()
            .fold(0i64, |acc, s| acc.gcd(&phi.evaluate(s)));
        if d == 0 {
            return Err(QuotientError::Internal("φ vanishes on a finite-index subgroup".into()));
        }
        Ok(d.unsigned_abs())
    }

    /// Whether `ker self ⊆ ker other`, i.e. `other` factors through `self`.
    pub fn kernel_contained_in(&self, other: &FiniteQuotient) -> bool {
        if self.generator_count() != other.generator_count() || !self.order().is_multiple_of(other.order()) {
            return false;
        }
        let mut f = vec![usize::MAX; self.order()];
        f[0] = 0;
        // transversal order is breadth-first, so parents precede children
        for e in 0..self.order() {
            for j in 0..self.generator_count() {
                let target = other.right[f[e]][j];
                let slot = &mut f[self.right[e][j]];
                if *slot == usize::MAX {
                    *slot = target;
                } else if *slot != target {
                    return false;
                }
            }
        }
        true
    }

    pub fn descriptor(&self) -> QuotientDescriptor {
        QuotientDescriptor {
            degree: self.degree,
            order: self.order(),
            generator_perms: self
                .generator_perms
                .iter()
                .map(|p| p.iter().map(|x| x + 1).collect())
                .collect(),
        }
    }
}

/// Point reached from `c` by acting with `w` on the right.
pub(crate) fn act(perms: &[Vec<usize>], c: usize, w: &Word) -> usize {
    w.letters().iter().fold(c, |x, l| {
        let p = &perms[l.generator];
        if l.inverse {
            p.iter().position(|&y| y == x).unwrap()
        } else {
            p[x]
        }
    })
}
