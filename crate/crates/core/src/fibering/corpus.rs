use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{analyze, AnalysisOptions, FiberingReport};
use crate::presentation::{parse_presentation_file, CorpusLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CorpusOutcome {
    Report(Box<FiberingReport>),
    Error { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub file: String,
    pub label: CorpusLabel,
    /// A fibered-labelled entry was obstructed.
    pub contradiction: bool,
    pub outcome: CorpusOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRun {
    pub schema: u32,
    pub entries: Vec<CorpusEntry>,
}

impl CorpusRun {
    pub fn contradictions(&self) -> usize {
        self.entries.iter().filter(|e| e.contradiction).count()
    }
}

/// Analyzes every `*.pres` file of `dir` in file-name order. Files that fail
/// to parse or analyze are recorded, not fatal.
pub fn run_corpus(dir: &Path, opts: &AnalysisOptions) -> std::io::Result<CorpusRun> {
    let mut files: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pres"))
        .collect();
    files.sort();
    let mut entries = Vec::new();
    for path in files {
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        let parsed = fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_presentation_file(&text).map_err(|e| e.to_string()));
        let mut label = CorpusLabel::Unknown;
        let outcome = match parsed {
            Err(message) => CorpusOutcome::Error { message },
            Ok(mut f) => {
                label = f.metadata.label;
                if f.presentation.name.is_empty() {
                    f.presentation.name = path.file_stem().unwrap().to_string_lossy().into_owned();
                }
                match f.class().map_err(|e| e.to_string()).and_then(|phi| {
                    analyze(&f.presentation, &phi, f.metadata.thurston_norm(), opts).map_err(|e| e.to_string())
                }) {
                    Ok(r) => CorpusOutcome::Report(Box::new(r)),
                    Err(message) => CorpusOutcome::Error { message },
                }
            }
        };
        let contradiction =
            label == CorpusLabel::Fibered && matches!(&outcome, CorpusOutcome::Report(r) if r.overall.is_obstruction());
        entries.push(CorpusEntry {
            file,
            label,
            contradiction,
            outcome,
        });
    }
    Ok(CorpusRun { schema: 1, entries })
}
