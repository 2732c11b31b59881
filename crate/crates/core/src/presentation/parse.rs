//! The line-oriented presentation format.
//!
//! ```text
//! # comment
//! name: trefoil
//! gens: x y
//! rel: x y x Y X Y
//! closed: false
//! phi: 1 1
//! label: fibered
//! genus: 1
//! norm: 1
//! ```
//!
//! Upper-casing a generator name denotes its inverse; `x^k` is also accepted.
//! Instead of `gens:`/`rel:` a file may give `pd: [[1,5,2,4],…]`, in which
//! case the Wirtinger presentation of that knot diagram is used.

use serde::{Deserialize, Serialize};

use super::{wirtinger, CohomologyClass, Letter, Presentation, PresentationError, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CorpusLabel {
    Fibered,
    Nonfibered,
    #[default]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Metadata {
    pub label: CorpusLabel,
    pub genus: Option<u64>,
    pub norm: Option<u64>,
}

impl Metadata {
    /// The Thurston norm if given, otherwise `2·genus − 1` for a knot of
    /// positive genus.
    pub fn thurston_norm(&self) -> Option<u64> {
        self.norm.or(self.genus.filter(|&g| g > 0).map(|g| 2 * g - 1))
    }
}

/// A parsed presentation file: the group, an optional class and metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub presentation: Presentation,
    pub phi: Option<CohomologyClass>,
    pub metadata: Metadata,
}

impl PresentationFile {
    /// The declared class, or the primitive one when `b₁ = 1`; validated.
    pub fn class(&self) -> Result<CohomologyClass, PresentationError> {
        let phi = match &self.phi {
            Some(phi) => phi.clone(),
            None => self.presentation.primitive_class()?,
        };
        self.presentation.validate_class(&phi)?;
        Ok(phi)
    }
}

/// Parses just the group; metadata keys are accepted and ignored.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    parse_presentation_file(text).map(|f| f.presentation)
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(st)) => {
                out.push((offset + st + 1, &s[st..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((offset + st + 1, &s[st..]));
    }
    out
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name.to_uppercase() != name
}

pub fn parse_presentation_file(text: &str) -> Result<PresentationFile, PresentationError> {
    let mut name = None;
    let mut gens: Option<(usize, Vec<String>)> = None;
    let mut raw_rels: Vec<(usize, usize, &str)> = Vec::new();
    let mut closed = None;
    let mut phi_line = None;
    let mut pd = None;
    let mut metadata = Metadata::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let colon = content
            .find(':')
            .ok_or_else(|| syntax(line_no, 1, "expected `key: value`"))?;
        let key = content[..colon].trim();
        let value_off = colon + 1;
        let value = &content[value_off..];
        let dup = |present: bool| -> Result<(), PresentationError> {
            if present {
                Err(syntax(line_no, 1, format!("duplicate `{key}` line")))
            } else {
                Ok(())
            }
        };
        match key {
            "name" => {
                dup(name.is_some())?;
                name = Some(value.trim().to_string());
            }
            "gens" => {
                dup(gens.is_some())?;
                let mut names: Vec<String> = Vec::new();
                for (col, tok) in tokens(value, value_off) {
                    if !valid_name(tok) {
                        return Err(syntax(line_no, col, format!("invalid generator name {tok:?}")));
                    }
                    let clash = names
                        .iter()
                        .any(|n| n == tok || n.to_uppercase() == tok || *n == tok.to_uppercase());
                    if clash {
                        return Err(syntax(
                            line_no,
                            col,
                            format!("generator {tok:?} clashes with an earlier name"),
                        ));
                    }
                    names.push(tok.to_string());
                }
                if names.is_empty() {
                    return Err(PresentationError::EmptyGenerators);
                }
                gens = Some((line_no, names));
            }
            "rel" => raw_rels.push((line_no, value_off, value)),
            "closed" => {
                dup(closed.is_some())?;
                closed = Some(match value.trim() {
                    "true" => true,
                    "false" => false,
                    _ => return Err(syntax(line_no, value_off + 1, "expected `true` or `false`")),
                });
            }
            "phi" => {
                dup(phi_line.is_some())?;
                phi_line = Some((line_no, value_off, value));
            }
            "pd" => {
                dup(pd.is_some())?;
                let code = wirtinger::parse_pd_json(value.trim())
                    .map_err(|e| syntax(line_no, value_off + 1, e.to_string()))?;
                pd = Some(code);
            }
            "label" => {
                metadata.label = match value.trim() {
                    "fibered" => CorpusLabel::Fibered,
                    "nonfibered" => CorpusLabel::Nonfibered,
                    "unknown" => CorpusLabel::Unknown,
                    _ => return Err(syntax(line_no, value_off + 1, "expected fibered|nonfibered|unknown")),
                }
            }
            "genus" | "norm" => {
                let v: u64 = value
                    .trim()
                    .parse()
                    .map_err(|_| syntax(line_no, value_off + 1, "expected a nonnegative integer"))?;
                if key == "genus" {
                    metadata.genus = Some(v);
                } else {
                    metadata.norm = Some(v);
                }
            }
            other => return Err(syntax(line_no, 1, format!("unknown key {other:?}"))),
        }
    }

    let closed = closed.unwrap_or(false);
    let mut presentation = match (gens, pd) {
        (Some(_), Some(_)) => return Err(syntax(1, 1, "give either `gens`/`rel` or `pd`, not both")),
        (None, Some(code)) => {
            if !raw_rels.is_empty() {
                return Err(syntax(raw_rels[0].0, 1, "`rel` lines need `gens`"));
            }
            let mut p = wirtinger::wirtinger_from_pd(&code)?;
            p.closed = closed;
            p
        }
        (None, None) => return Err(PresentationError::EmptyGenerators),
        (Some((_, names)), None) => {
            let mut relators = Vec::new();
            for (line_no, off, value) in raw_rels {
                let toks = tokens(value, off);
                if toks.is_empty() {
                    continue;
                }
                let mut letters = Vec::new();
                for (col, tok) in toks {
                    letters.extend(parse_letter(tok, &names, line_no, col)?);
                }
                relators.push(Word::new(letters));
            }
            Presentation::new("", names, relators, closed)?
        }
    };
    presentation.name = name.unwrap_or_else(|| presentation.name.clone());

    let phi = match phi_line {
        None => None,
        Some((line_no, off, value)) => {
            let mut images = Vec::new();
            for (col, tok) in tokens(value, off) {
                images.push(
                    tok.parse::<i64>()
                        .map_err(|_| syntax(line_no, col, format!("expected an integer, got {tok:?}")))?,
                );
            }
            if images.len() != presentation.generator_count() {
                return Err(PresentationError::ClassLength {
                    expected: presentation.generator_count(),
                    got: images.len(),
                });
            }
            Some(CohomologyClass::new(images))
        }
    };

    Ok(PresentationFile {
        presentation,
        phi,
        metadata,
    })
}

fn parse_letter(tok: &str, names: &[String], line: usize, col: usize) -> Result<Vec<Letter>, PresentationError> {
    let (base, exp) = match tok.split_once('^') {
        None => (tok, 1i64),
        Some((b, e)) => {
            let e = e
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse::<i64>()
                .map_err(|_| syntax(line, col, format!("bad exponent in {tok:?}")))?;
            (b, e)
        }
    };
    let (generator, inverse) = if let Some(j) = names.iter().position(|n| n == base) {
        (j, false)
    } else if let Some(j) = names.iter().position(|n| n.to_uppercase() == base) {
        (j, true)
    } else {
        return Err(PresentationError::UndeclaredGenerator {
            line,
            column: col,
            name: base.to_string(),
        });
    };
    let letter = Letter::new(generator, inverse ^ (exp < 0));
    Ok(vec![letter; exp.unsigned_abs() as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_and_free_group() {
        let t = parse_presentation("gens: x y\nrel: x y x Y X Y\nclosed: false").unwrap();
        assert_eq!((t.generator_count(), t.relators().len()), (2, 1));
        assert_eq!(t.relators()[0].to_signed(), vec![1, 2, 1, -2, -1, -2]);
        assert!(!t.closed);

        let z = parse_presentation("gens: x\nrel:\nclosed: false").unwrap();
        assert_eq!((z.generator_count(), z.relators().len(), z.deficiency()), (1, 0, 1));
    }

    #[test]
    fn relators_are_reduced_and_powers_expand() {
        let p = parse_presentation("gens: a b\nrel: a b B a^-1 b^3\nclosed: true").unwrap();
        assert_eq!(p.relators()[0].to_signed(), vec![2, 2, 2]);
        assert!(p.closed);
        let p = parse_presentation("gens: a\nrel: a A").unwrap();
        assert!(p.relators().is_empty());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_presentation("gens: x y\nrel: x z") {
            Err(PresentationError::UndeclaredGenerator { line, column, name }) => {
                assert_eq!((line, column, name.as_str()), (2, 8, "z"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_presentation("gens:\n"), Err(PresentationError::EmptyGenerators));
        assert_eq!(parse_presentation("rel: x"), Err(PresentationError::EmptyGenerators));
        assert!(matches!(
            parse_presentation("gens: x\nbogus line"),
            Err(PresentationError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_presentation("gens: x X"),
            Err(PresentationError::Syntax { line: 1, column: 9, .. })
        ));
        assert!(matches!(
            parse_presentation("gens: x\nclosed: maybe"),
            Err(PresentationError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn metadata_and_class() {
        let f = parse_presentation_file(
            "name: t\ngens: x y\nrel: x y x Y X Y\nphi: 1 1\nlabel: fibered\ngenus: 1 # trefoil",
        )
        .unwrap();
        assert_eq!(f.presentation.name, "t");
        assert_eq!(f.metadata.label, CorpusLabel::Fibered);
        assert_eq!(f.metadata.thurston_norm(), Some(1));
        assert_eq!(f.class().unwrap().images, vec![1, 1]);

        let bad = parse_presentation_file("gens: x\nrel: x x\nphi: 1").unwrap();
        assert_eq!(bad.class(), Err(PresentationError::NotAHomomorphism(1)));
        assert!(matches!(
            parse_presentation_file("gens: x y\nphi: 1"),
            Err(PresentationError::ClassLength { .. })
        ));
    }

    #[test]
    fn pd_line() {
        let f = parse_presentation_file("pd: [[1,5,2,4],[3,1,4,6],[5,3,6,2]]\nlabel: fibered").unwrap();
        assert_eq!(f.presentation.generator_count(), 3);
        assert_eq!(f.presentation.relators().len(), 2);
        assert_eq!(f.class().unwrap().images, vec![1, 1, 1]);
    }
}
