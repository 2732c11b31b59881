//! Low-index enumeration of transitive permutation representations by
//! backtracking over standard coset tables.

use std::collections::BTreeMap;

use super::group::Closure;
use super::FiniteQuotient;
use crate::presentation::Presentation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_degree: usize,
    pub max_order: usize,
    /// Cap on search nodes, one per tentative table entry.
    pub budget_nodes: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_degree: 6,
            max_order: 120,
            budget_nodes: 10_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Sorted by order, then by regular table.
    pub quotients: Vec<FiniteQuotient>,
    /// The node budget ran out; the list may be incomplete.
    pub truncated: bool,
    pub nodes: u64,
}

const UNDEF: usize = usize::MAX;

struct Search<'a> {
    relators: Vec<Vec<usize>>,
    cols: usize,
    opts: &'a EnumerationOptions,
    table: Vec<Vec<usize>>,
    cosets: usize,
    trail: Vec<(usize, usize)>,
    nodes: u64,
    truncated: bool,
    found: BTreeMap<Vec<usize>, FiniteQuotient>,
}

pub fn enumerate_quotients(pres: &Presentation, opts: &EnumerationOptions) -> Enumeration {
    assert!(opts.max_degree >= 1, "max_degree must be positive");
    let g = pres.generator_count();
    let relators = pres
        .relators()
        .iter()
        .map(|r| {
            r.letters()
                .iter()
                .map(|l| 2 * l.generator + l.inverse as usize)
                .collect()
        })
        .collect();
    let mut s = Search {
        relators,
        cols: 2 * g,
        opts,
        table: vec![vec![UNDEF; 2 * g]; opts.max_degree],
        cosets: 1,
        trail: Vec::new(),
        nodes: 0,
        truncated: false,
        found: BTreeMap::new(),
    };
    if s.deduce() {
        s.search();
    }
    let mut quotients: Vec<FiniteQuotient> = s.found.into_values().collect();
    quotients.sort_by_key(|q| (q.order(), q.key()));
    Enumeration {
        quotients,
        truncated: s.truncated,
        nodes: s.nodes,
    }
}

impl Search<'_> {
    fn search(&mut self) {
        let next = (0..self.cosets)
            .flat_map(|c| (0..self.cols).map(move |col| (c, col)))
            .find(|&(c, col)| self.table[c][col] == UNDEF);
        let Some((c, col)) = next else {
            self.complete();
            return;
        };
        let icol = col ^ 1;
        for d in 0..self.cosets {
            if self.table[d][icol] == UNDEF {
                self.attempt(c, col, d);
            }
        }
        if self.cosets < self.opts.max_degree {
            self.cosets += 1;
            self.attempt(c, col, self.cosets - 1);
            self.cosets -= 1;
        }
    }

    fn attempt(&mut self, c: usize, col: usize, d: usize) {
        if self.truncated {
            return;
        }
        if self.nodes >= self.opts.budget_nodes {
            self.truncated = true;
            return;
        }
        self.nodes += 1;
        let mark = self.trail.len();
        self.set(c, col, d);
        if self.deduce() {
            self.search();
        }
        while self.trail.len() > mark {
            let (c, col) = self.trail.pop().unwrap();
            self.table[c][col] = UNDEF;
        }
    }

    /// Sets `c·col = d` and the inverse entry.
    fn set(&mut self, c: usize, col: usize, d: usize) {
        self.table[c][col] = d;
        self.trail.push((c, col));
        self.table[d][col ^ 1] = c;
        self.trail.push((d, col ^ 1));
    }

    /// Scans every relator from every coset until nothing more follows.
    /// Returns `false` on a contradiction.
    fn deduce(&mut self) -> bool {
        loop {
            let mut changed = false;
            for ri in 0..self.relators.len() {
                let m = self.relators[ri].len();
                for c in 0..self.cosets {
                    let r = &self.relators[ri];
                    let (mut f, mut i) = (c, 0);
                    while i < m && self.table[f][r[i]] != UNDEF {
                        f = self.table[f][r[i]];
                        i += 1;
                    }
                    if i == m {
                        if f != c {
                            return false;
                        }
                        continue;
                    }
                    let (mut b, mut j) = (c, m);
                    while j > i && self.table[b][r[j - 1] ^ 1] != UNDEF {
                        b = self.table[b][r[j - 1] ^ 1];
                        j -= 1;
                    }
                    if j == i {
                        if f != b {
                            return false;
                        }
                    } else if j == i + 1 {
                        let col = r[i];
                        if self.table[b][col ^ 1] != UNDEF {
                            return false;
                        }
                        self.set(f, col, b);
                        changed = true;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn complete(&mut self) {
        let d = self.cosets;
        let perms: Vec<Vec<usize>> = (0..self.cols / 2)
            .map(|j| (0..d).map(|c| self.table[c][2 * j]).collect())
            .collect();
        let Some(closure) = Closure::compute(&perms, self.opts.max_order) else {
            return;
        };
        // one representative per kernel, of least degree
        let key = closure.key();
        match self.found.get(&key) {
            Some(old) if old.degree() <= d => {}
            _ => {
                self.found.insert(key, closure.finish(perms));
            }
        }
    }
}
