use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dense;
use super::LaurentError;

/// An integer Laurent polynomial in one variable `t`.
///
/// Stored densely as `t^low · (c_0 + c_1 t + …)`. The zero polynomial has no
/// coefficients and `low == 0`; otherwise the first and last coefficients are
/// nonzero, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `c · t^exp`.
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        Self::from_dense(exp, vec![c.into()])
    }

    /// `t^low · Σ coeffs[i] t^i`; zero coefficients at either end are fine.
    pub fn from_dense(low: i64, mut coeffs: Vec<BigInt>) -> Self {
        dense::trim(&mut coeffs);
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead_zeros);
        LaurentPoly {
            low: low + lead_zeros as i64,
            coeffs,
        }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    /// Ascending coefficients from `t^0`, e.g. `&[1, -1, 1]` is `t² − t + 1`.
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_dense(0, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Coefficients from `t^min_exp` upward, including interior zeros.
    pub(crate) fn dense_coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Span `max_exp − min_exp`.
    pub fn degree(&self) -> Result<i64, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(self.coeffs.len() as i64 - 1)
    }

    /// True iff the top coefficient is `±1`.
    pub fn is_monic(&self) -> Result<bool, LaurentError> {
        let lead = self.leading_coeff().ok_or(LaurentError::ZeroPolynomial)?;
        Ok(lead.abs().is_one())
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_dense(self.low, dense::scale(&self.coeffs, c))
    }

    /// Canonical representative of the orbit under units `±t^k`: lowest
    /// exponent zero and positive leading coefficient.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let negate = self.coeffs.last().unwrap().is_negative();
        LaurentPoly {
            low: 0,
            coeffs: if negate {
                self.coeffs.iter().map(|c| -c).collect()
            } else {
                self.coeffs.clone()
            },
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.last().unwrap().is_positive())
    }

    /// Gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        dense::content(&self.coeffs)
    }

    /// Normalized gcd in ℤ[t^±1].
    pub fn gcd(&self, other: &Self) -> Self {
        Self::from_dense(0, dense::gcd(&self.coeffs, &other.coeffs))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `t ↦ t^{-1}`.
    pub fn invert_variable(&self) -> Self {
        match self.max_exp() {
            None => Self::zero(),
            Some(hi) => Self::from_dense(-hi, self.coeffs.iter().rev().cloned().collect()),
        }
    }

    /// Exact quotient over ℚ[t^±1]: `r` with `self = divisor · r`.
    pub fn exact_div(&self, divisor: &Self) -> Result<RatLaurentPoly, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(RatLaurentPoly::zero());
        }
        let shift = self.low - divisor.low;
        if let Some(q) = dense::div_exact(&self.coeffs, &divisor.coeffs) {
            return Ok(RatLaurentPoly::from(&LaurentPoly::from_dense(shift, q)));
        }
        let num: Vec<BigRational> = self.coeffs.iter().cloned().map(BigRational::from_integer).collect();
        let den: Vec<BigRational> = divisor.coeffs.iter().cloned().map(BigRational::from_integer).collect();
        rational_div_exact(&num, &den)
            .map(|q| RatLaurentPoly::from_dense(shift, q))
            .ok_or(LaurentError::NotDivisible)
    }

    /// Exact quotient when it has integer coefficients.
    pub fn exact_div_integral(&self, divisor: &Self) -> Result<LaurentPoly, LaurentError> {
        self.exact_div(divisor)?.to_integral().ok_or(LaurentError::NotDivisible)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_ok()
    }

    /// Evaluates at an integer point; requires a nonnegative exponent range
    /// unless `x` is ±1.
    pub fn eval_i64(&self, x: i64) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        if self.low < 0 && x.abs() != 1 {
            return None;
        }
        let xb = BigInt::from(x);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &xb + c;
        }
        let base = if self.low >= 0 {
            xb.pow(self.low as u32)
        } else if x == -1 && self.low % 2 != 0 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        Some(acc * base)
    }

    pub fn to_pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms().map(|(e, c)| (e, c.clone())).collect()
    }
}

fn rational_div_exact(a: &[BigRational], b: &[BigRational]) -> Option<Vec<BigRational>> {
    if a.len() < b.len() {
        return None;
    }
    let lead = b.last().unwrap().clone();
    let mut rem = a.to_vec();
    let qlen = a.len() - b.len() + 1;
    let mut quo = vec![BigRational::zero(); qlen];
    for k in (0..qlen).rev() {
        let top = rem[k + b.len() - 1].clone();
        if top.is_zero() {
            continue;
        }
        let q = top / &lead;
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &q * bi;
        }
        quo[k] = q;
    }
    rem.iter().all(Zero::is_zero).then_some(quo)
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn aligned(a: &LaurentPoly, b: &LaurentPoly) -> (i64, Vec<BigInt>, Vec<BigInt>) {
    let lo = a.low.min(b.low);
    let pad = |p: &LaurentPoly| {
        let mut v = vec![BigInt::zero(); (p.low - lo) as usize];
        v.extend_from_slice(&p.coeffs);
        v
    };
    (lo, pad(a), pad(b))
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (lo, a, b) = aligned(self, rhs);
        LaurentPoly::from_dense(lo, dense::add(&a, &b))
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        if rhs.is_zero() {
            return self.clone();
        }
        let (lo, a, b) = aligned(self, rhs);
        LaurentPoly::from_dense(lo, dense::sub(&a, &b))
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::from_dense(self.low + rhs.low, dense::mul(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl fmt::Display for LaurentPoly {
    /// Descending exponents, e.g. `2*t^2 - 3*t + 2`, `t^-1 + 1`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write_power(f, e)?,
                (_, false) => {
                    write!(f, "{mag}*")?;
                    write_power(f, e)?;
                }
            }
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    if e == 1 {
        f.write_str("t")
    } else {
        write!(f, "t^{e}")
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Accepts the canonical rendering plus some slack: optional `*`,
    /// whitespace anywhere, `t^(-2)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LaurentError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff = if i > start {
                compact[start..i].parse::<BigInt>().map_err(|_| bad())?
            } else {
                BigInt::one()
            };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                if i >= bytes.len() || bytes[i] != b't' {
                    return Err(bad());
                }
            }
            let mut exp = 0i64;
            if i < bytes.len() && bytes[i] == b't' {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let paren = i < bytes.len() && bytes[i] == b'(';
                    if paren {
                        i += 1;
                    }
                    let es = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = compact[es..i].parse().map_err(|_| bad())?;
                    if paren {
                        if i >= bytes.len() || bytes[i] != b')' {
                            return Err(bad());
                        }
                        i += 1;
                    }
                }
            } else if i == start {
                return Err(bad());
            }
            terms.push((exp, sign * coeff));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

/// Serialized as an array of `[exponent, coefficient]` pairs in ascending
/// exponent order. Coefficients outside the `i64` range are written as
/// decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.num_terms()))?;
        for (e, c) in self.terms() {
            match i64::try_from(c) {
                Ok(small) => seq.serialize_element(&(e, small))?,
                Err(_) => seq.serialize_element(&(e, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairsVisitor;
        impl<'de> Visitor<'de> for PairsVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                while let Some((e, c)) = seq.next_element::<(i64, CoeffRepr)>()? {
                    let c = match c {
                        CoeffRepr::Small(v) => BigInt::from(v),
                        CoeffRepr::Big(s) => s.parse().map_err(de::Error::custom)?,
                    };
                    terms.push((e, c));
                }
                Ok(LaurentPoly::from_terms(terms))
            }
        }
        deserializer.deserialize_seq(PairsVisitor)
    }
}

/// A Laurent polynomial with rational coefficients, produced by division.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatLaurentPoly {
    low: i64,
    coeffs: Vec<BigRational>,
}

impl RatLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    fn from_dense(low: i64, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..lead);
        RatLaurentPoly {
            low: low + lead as i64,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        let i = exp - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigRational::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// The same polynomial over ℤ, if every coefficient is an integer.
    pub fn to_integral(&self) -> Option<LaurentPoly> {
        if !self.coeffs.iter().all(|c| c.is_integer()) {
            return None;
        }
        Some(LaurentPoly::from_dense(
            self.low,
            self.coeffs.iter().map(|c| c.to_integer()).collect(),
        ))
    }
}

impl From<&LaurentPoly> for RatLaurentPoly {
    fn from(p: &LaurentPoly) -> Self {
        RatLaurentPoly::from_dense(p.low, p.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }
}

impl fmt::Display for RatLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.low + i as i64;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write_power(f, e)?,
                (_, false) => {
                    write!(f, "({mag})*")?;
                    write_power(f, e)?;
                }
            }
        }
        Ok(())
    }
}
