//! Finitely presented groups, integral cohomology classes, and their
//! ingestion from text files and planar diagram codes.

mod parse;
pub mod smith;
mod wirtinger;
mod word;

pub use parse::{parse_presentation, parse_presentation_file, CorpusLabel, Metadata, PresentationFile};
pub use wirtinger::{parse_pd_json, wirtinger_from_pd};
pub use word::{Letter, Word};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: undeclared generator {name:?}")]
    UndeclaredGenerator { line: usize, column: usize, name: String },
    #[error("presentation has no generators")]
    EmptyGenerators,
    #[error("relator {relator} uses generator {generator} but only {count} are declared")]
    GeneratorOutOfRange {
        relator: usize,
        generator: usize,
        count: usize,
    },
    #[error("class has {got} values for {expected} generators")]
    ClassLength { expected: usize, got: usize },
    #[error("class does not vanish on relator {0}")]
    NotAHomomorphism(usize),
    #[error("class is identically zero")]
    TrivialClass,
    #[error("first Betti number is {0}; specify the class explicitly with `phi:`")]
    AmbiguousClass(usize),
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
    #[error("PD code describes a link with {0} components; only knots are supported")]
    MultiComponentLink(usize),
}

/// A finitely presented group `⟨x_1, …, x_g | r_1, …, r_r⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    generator_names: Vec<String>,
    relators: Vec<Word>,
    /// Closed 3-manifold convention (`b₃ = 1`) rather than toroidal boundary.
    pub closed: bool,
}

/// First homology `ℤ^betti ⊕ ⊕ ℤ/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl Presentation {
    /// Validates generator indices; relators are stored freely reduced and
    /// relators that reduce to the empty word are dropped.
    pub fn new(
        name: impl Into<String>,
        generator_names: Vec<String>,
        relators: Vec<Word>,
        closed: bool,
    ) -> Result<Self, PresentationError> {
        if generator_names.is_empty() {
            return Err(PresentationError::EmptyGenerators);
        }
        let g = generator_names.len();
        for (i, r) in relators.iter().enumerate() {
            if r.generator_bound() > g {
                return Err(PresentationError::GeneratorOutOfRange {
                    relator: i + 1,
                    generator: r.generator_bound(),
                    count: g,
                });
            }
        }
        Ok(Presentation {
            name: name.into(),
            generator_names,
            relators: relators
                .into_iter()
                .map(|r| Word::new(r.letters().iter().copied()))
                .filter(|r| !r.is_empty())
                .collect(),
            closed,
        })
    }

    /// Generators named `x1 … xg`.
    pub fn with_default_names(
        name: impl Into<String>,
        g: usize,
        relators: Vec<Word>,
        closed: bool,
    ) -> Result<Self, PresentationError> {
        Self::new(name, (1..=g).map(|i| format!("x{i}")).collect(), relators, closed)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `g − r`.
    pub fn deficiency(&self) -> i64 {
        self.generator_count() as i64 - self.relators.len() as i64
    }

    /// `b₃` of the underlying 3-manifold as declared by `closed`.
    pub fn b3(&self) -> u32 {
        self.closed as u32
    }

    /// `r × g` exponent-sum matrix.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        let g = self.generator_count();
        self.relators.iter().map(|r| r.exponent_sums(g)).collect()
    }

    pub fn abelianization(&self) -> Abelianization {
        let g = self.generator_count();
        let form = smith::smith_form(&self.relation_matrix(), g);
        Abelianization {
            betti: g - form.rank(),
            torsion: smith::torsion_of(&form),
        }
    }

    /// The primitive class when `H¹ ≅ ℤ`, signed so its first nonzero value
    /// is positive.
    pub fn primitive_class(&self) -> Result<CohomologyClass, PresentationError> {
        let g = self.generator_count();
        let form = smith::smith_form(&self.relation_matrix(), g);
        let kernel = form.kernel_basis();
        if kernel.len() != 1 {
            return Err(PresentationError::AmbiguousClass(kernel.len()));
        }
        let mut v = kernel.into_iter().next().unwrap();
        let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in v.iter_mut() {
            *x /= &content;
            if negate {
                *x = -&*x;
            }
        }
        let images = v.iter().map(|x| x.to_i64().expect("class value fits in i64")).collect();
        Ok(CohomologyClass::new(images))
    }

    /// Confirms that `phi` is a nontrivial homomorphism to ℤ.
    pub fn validate_class(&self, phi: &CohomologyClass) -> Result<(), PresentationError> {
        if phi.images.len() != self.generator_count() {
            return Err(PresentationError::ClassLength {
                expected: self.generator_count(),
                got: phi.images.len(),
            });
        }
        if let Some(i) = self.relators.iter().position(|r| phi.evaluate(r) != 0) {
            return Err(PresentationError::NotAHomomorphism(i + 1));
        }
        if phi.is_trivial() {
            return Err(PresentationError::TrivialClass);
        }
        Ok(())
    }

    /// Canonical text in the presentation file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("gens: {}\n", self.generator_names.join(" "));
        for r in &self.relators {
            s.push_str(&format!("rel: {}\n", r.display_with(&self.generator_names)));
        }
        s.push_str(&format!("closed: {}\n", self.closed));
        s
    }

    /// Hex SHA-256 of the canonical text; used as a cache key.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// A homomorphism `π → ℤ` given by its values on the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohomologyClass {
    pub images: Vec<i64>,
}

impl CohomologyClass {
    pub fn new(images: Vec<i64>) -> Self {
        CohomologyClass { images }
    }

    pub fn evaluate(&self, w: &Word) -> i64 {
        w.letters().iter().map(|l| l.sign() * self.images[l.generator]).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&v| v == 0)
    }

    /// Gcd of the generator images, i.e. the divisibility of the class.
    pub fn divisibility(&self) -> u64 {
        self.images.iter().fold(0i64, |acc, &v| acc.gcd(&v)).unsigned_abs()
    }
}
