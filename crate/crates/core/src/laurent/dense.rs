//! Dense ordinary polynomials over ℤ stored as ascending coefficient vectors.
//!
//! These helpers back [`LaurentPoly`](super::LaurentPoly) once a power of `t`
//! has been factored out. Vectors passed in and returned are trimmed: no
//! trailing zeros, and the zero polynomial is the empty vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

pub(crate) fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (o, s) in out.iter_mut().zip(b) {
        *o -= s;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Gcd of all coefficients, nonnegative; zero for the zero polynomial.
pub(crate) fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the content and makes the leading coefficient positive.
pub(crate) fn primitive_part(a: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut c = content(a);
    if a.last().unwrap().is_negative() {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

/// Quotient `a / b` over ℤ[t] when it exists with integer coefficients and
/// zero remainder. `b` must be nonzero.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    debug_assert!(!b.is_empty());
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let lead = b.last().unwrap();
    let mut rem = a.to_vec();
    let qlen = a.len() - b.len() + 1;
    let mut quo = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let top = &rem[k + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (i, bi) in b.iter().enumerate() {
            if !bi.is_zero() {
                rem[k + i] -= &q * bi;
            }
        }
        quo[k] = q;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut quo);
    Some(quo)
}

/// Pseudo-remainder of `a` by `b`: `lc(b)^(deg a - deg b + 1) · a mod b`.
pub(crate) fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(!b.is_empty());
    if a.len() < b.len() {
        return a.to_vec();
    }
    let lead = b.last().unwrap().clone();
    let mut rem = a.to_vec();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let top = rem.last().unwrap().clone();
        for c in rem.iter_mut() {
            *c *= &lead;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[shift + i] -= &top * bi;
        }
        trim(&mut rem);
    }
    rem
}

/// Gcd in ℤ[t] with positive leading coefficient (primitive PRS).
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return primitive_sign(b);
    }
    if b.is_empty() {
        return primitive_sign(a);
    }
    let c = content(a).gcd(&content(b));
    let (mut x, mut y) = if a.len() >= b.len() {
        (primitive_part(a), primitive_part(b))
    } else {
        (primitive_part(b), primitive_part(a))
    };
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive_part(&r);
    }
    scale(&x, &c)
}

fn primitive_sign(a: &[BigInt]) -> Vec<BigInt> {
    match a.last() {
        Some(l) if l.is_negative() => a.iter().map(|x| -x).collect(),
        _ => a.to_vec(),
    }
}

pub(crate) fn one() -> Vec<BigInt> {
    vec![BigInt::one()]
}
