use std::fmt;

use serde::{Deserialize, Serialize};

/// A generator or its inverse. `generator` is 0-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// `+1` for a generator, `−1` for an inverse.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Signed 1-based encoding: `x_j ↦ j`, `x_j⁻¹ ↦ −j`.
    pub fn to_signed(self) -> i32 {
        let j = self.generator as i32 + 1;
        if self.inverse {
            -j
        } else {
            j
        }
    }

    /// Panics on 0.
    pub fn from_signed(s: i32) -> Self {
        assert!(s != 0, "letter index 0");
        Letter::new(s.unsigned_abs() as usize - 1, s < 0)
    }
}

/// A freely reduced word in the generators. Serialized in the signed
/// 1-based encoding.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(into = "Vec<i32>", try_from = "Vec<i32>")]
pub struct Word(Vec<Letter>);

impl From<Word> for Vec<i32> {
    fn from(w: Word) -> Self {
        w.to_signed()
    }
}

impl TryFrom<Vec<i32>> for Word {
    type Error = String;

    fn try_from(v: Vec<i32>) -> Result<Self, String> {
        if v.contains(&0) {
            return Err("letter index 0".into());
        }
        Ok(Word::from_signed(&v))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces `letters`.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn generator(j: usize) -> Self {
        Word(vec![Letter::new(j, false)])
    }

    /// From the signed 1-based encoding, e.g. `[1, 2, -1]` is `x y X`.
    pub fn from_signed(letters: &[i32]) -> Self {
        Word::new(letters.iter().map(|&s| Letter::from_signed(s)))
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.to_signed()).collect()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Freely reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Self {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn push(&self, l: Letter) -> Self {
        self.concat(&Word(vec![l]))
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty();
        for _ in 0..k.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// Largest generator index used plus one; 0 for the empty word.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    /// Exponent sum of each of `g` generators.
    pub fn exponent_sums(&self, g: usize) -> Vec<i64> {
        let mut sums = vec![0; g];
        for l in &self.0 {
            sums[l.generator] += l.sign();
        }
        sums
    }

    /// Renders with generator names; inverses are upper-cased.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay { word: self, names }
    }
}

struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let name = &self.names[l.generator];
            if l.inverse {
                write!(f, "{}", name.to_uppercase())?;
            } else {
                f.write_str(name)?;
            }
        }
        Ok(())
    }
}
