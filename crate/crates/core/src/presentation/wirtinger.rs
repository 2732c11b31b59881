//! Wirtinger presentations from planar diagram codes.
//!
//! A crossing `[a, b, c, d]` lists edge labels counterclockwise starting from
//! the incoming under-edge `a`; `c` is the outgoing under-edge and `b`, `d`
//! lie on the over-strand. Labels run consecutively along the knot.

use std::collections::BTreeMap;

use super::{Letter, Presentation, PresentationError, Word};

pub fn parse_pd_json(text: &str) -> Result<Vec<[i64; 4]>, PresentationError> {
    serde_json::from_str(text).map_err(|e| PresentationError::MalformedPd(e.to_string()))
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Generators are arcs, numbered by their smallest edge label; the relator
/// of the last crossing is dropped.
pub fn wirtinger_from_pd(pd: &[[i64; 4]]) -> Result<Presentation, PresentationError> {
    if pd.is_empty() {
        return Presentation::new("unknot", vec!["x1".into()], vec![], false);
    }
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for x in pd {
        for &l in x {
            *counts.entry(l).or_default() += 1;
        }
    }
    if let Some((l, c)) = counts.iter().find(|(_, &c)| c != 2) {
        return Err(PresentationError::MalformedPd(format!("label {l} appears {c} times")));
    }
    let lo = *counts.keys().next().unwrap();
    let m = counts.len();
    if *counts.keys().last().unwrap() != lo + m as i64 - 1 {
        return Err(PresentationError::MalformedPd(
            "edge labels are not a consecutive range".into(),
        ));
    }
    if m != 2 * pd.len() {
        return Err(PresentationError::MalformedPd(format!(
            "{} crossings need {} labels, found {m}",
            pd.len(),
            2 * pd.len()
        )));
    }
    let idx = |l: i64| (l - lo) as usize;
    let succ = |e: usize| (e + 1) % m;

    let mut strands: Vec<usize> = (0..m).collect();
    for x in pd {
        union(&mut strands, idx(x[0]), idx(x[2]));
        union(&mut strands, idx(x[1]), idx(x[3]));
    }
    let components = (0..m).filter(|&e| find(&mut strands, e) == e).count();
    if components > 1 {
        return Err(PresentationError::MultiComponentLink(components));
    }
    for x in pd {
        if idx(x[2]) != succ(idx(x[0])) {
            return Err(PresentationError::MalformedPd(format!(
                "crossing {x:?}: outgoing under-edge must follow the incoming one"
            )));
        }
    }

    let mut arcs: Vec<usize> = (0..m).collect();
    for x in pd {
        union(&mut arcs, idx(x[1]), idx(x[3]));
    }
    // roots are minimal labels, so enumerating them in order numbers arcs
    let mut arc_of = vec![0usize; m];
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    for (e, slot) in arc_of.iter_mut().enumerate() {
        let r = find(&mut arcs, e);
        let next = ids.len();
        *slot = *ids.entry(r).or_insert(next);
    }
    let g = ids.len();
    if g != pd.len() {
        return Err(PresentationError::MalformedPd(format!(
            "{} arcs for {} crossings",
            g,
            pd.len()
        )));
    }

    let relators = pd[..pd.len() - 1]
        .iter()
        .map(|x| {
            let (a, b, c, d) = (idx(x[0]), idx(x[1]), idx(x[2]), idx(x[3]));
            let (ao, aa, ac) = (arc_of[b], arc_of[a], arc_of[c]);
            let forward = b == succ(d);
            Word::new([
                Letter::new(ao, !forward),
                Letter::new(aa, false),
                Letter::new(ao, forward),
                Letter::new(ac, true),
            ])
        })
        .collect();
    Presentation::with_default_names("", g, relators, false)
}
