//! JSON cache of enumeration results keyed by presentation hash and bounds.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{enumerate_quotients, Enumeration, EnumerationOptions, FiniteQuotient};
use crate::presentation::Presentation;

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    entries: BTreeMap<String, CachedEnumeration>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CachedEnumeration {
    truncated: bool,
    nodes: u64,
    /// 1-based generator images per quotient.
    quotients: Vec<Vec<Vec<usize>>>,
}

fn cache_key(pres: &Presentation, opts: &EnumerationOptions) -> String {
    format!(
        "{}:{}:{}:{}",
        pres.content_hash(),
        opts.max_degree,
        opts.max_order,
        opts.budget_nodes
    )
}

fn restore(pres: &Presentation, cached: &CachedEnumeration) -> Option<Enumeration> {
    let quotients = cached
        .quotients
        .iter()
        .map(|perms| {
            let perms = perms
                .iter()
                .map(|p| p.iter().map(|&x| x.checked_sub(1)).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?;
            FiniteQuotient::from_permutations(pres, perms).ok()
        })
        .collect::<Option<Vec<_>>>()?;
    Some(Enumeration {
        quotients,
        truncated: cached.truncated,
        nodes: cached.nodes,
    })
}

/// Enumerates through the cache at `path`. An unreadable or stale cache is
/// ignored; a failed write is reported on stderr and otherwise harmless.
pub fn enumerate_cached(pres: &Presentation, opts: &EnumerationOptions, path: &Path) -> Enumeration {
    let mut file: CacheFile = fs::read_to_string(path)
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default();
    let key = cache_key(pres, opts);
    if let Some(e) = file.entries.get(&key).and_then(|c| restore(pres, c)) {
        return e;
    }
    let e = enumerate_quotients(pres, opts);
    file.entries.insert(
        key,
        CachedEnumeration {
            truncated: e.truncated,
            nodes: e.nodes,
            quotients: e.quotients.iter().map(|q| q.descriptor().generator_perms).collect(),
        },
    );
    let written = serde_json::to_string(&file)
        .map_err(|e| e.to_string())
        .and_then(|s| fs::write(path, s).map_err(|e| e.to_string()));
    if let Err(err) = written {
        eprintln!("warning: could not write quotient cache {}: {err}", path.display());
    }
    e
}
