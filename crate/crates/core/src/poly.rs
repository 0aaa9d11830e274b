//! Dense univariate polynomials over `F_p`, irreducibility testing, the action
//! of polynomials on sequences, and Berlekamp–Massey recovery of minimal
//! generating polynomials.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElement, PrimeField};

/// Default bound on `p^d` for [`enumerate_irreducibles`].
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("sequence of length {len} too short for a degree-{degree} polynomial")]
    SequenceTooShort { len: usize, degree: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("enumeration of {candidates} candidates exceeds the limit {limit}")]
    LimitExceeded { candidates: u128, limit: u64 },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("block sequence entries have mismatched shape: {0}")]
    Shape(String),
}

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: PrimeField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    /// Ascending integer coefficients, reduced mod p.
    pub fn from_coeffs(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, FieldElement::ONE)
    }

    pub fn constant(field: PrimeField, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// `c * x^k`
    pub fn monomial(field: PrimeField, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn x(field: PrimeField) -> Self {
        Self::monomial(field, FieldElement::ONE, 1)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == FieldElement::ONE
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..len)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            f,
            (0..len)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, s: FieldElement) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.same_field(divisor);
        let Some(dd) = divisor.degree() else {
            return Err(PolyError::DivisionByZero);
        };
        let f = self.field;
        let lead_inv = f
            .inv(divisor.leading())
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self
            .field
            .inv(self.leading())
            .expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic lcm; zero if either argument is zero.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let g = self.gcd(other);
        let (q, _) = self.div_rem(&g).expect("gcd is nonzero");
        q.mul(other).monic()
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.rem(self).expect("nonzero divisor").is_zero()
    }

    /// `self^e mod modulus` for a machine-word exponent.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Result<Poly, PolyError> {
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(self.field).rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Parses `6,3,1` (ascending coefficients) or `x^2+3x+6`.
    pub fn parse(field: PrimeField, input: &str) -> Result<Poly, PolyError> {
        let err = |reason: &str| PolyError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        if !s.contains('x') {
            let coeffs = s
                .split(',')
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| err(&format!("bad coefficient {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Poly::from_coeffs(field, &coeffs));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1i64, &rest[1..]),
                b'-' => (-1i64, &rest[1..]),
                _ => (1i64, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(err("dangling sign"));
            }
            let (coef, power) = match term.find('x') {
                None => (
                    term.parse::<i64>()
                        .map_err(|_| err(&format!("bad term {term:?}")))?,
                    0,
                ),
                Some(pos) => {
                    let c = term[..pos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        1
                    } else {
                        c.parse::<i64>()
                            .map_err(|_| err(&format!("bad coefficient {c:?}")))?
                    };
                    let tail = &term[pos + 1..];
                    let k = if tail.is_empty() {
                        1
                    } else if let Some(k) = tail.strip_prefix('^') {
                        k.parse::<usize>()
                            .map_err(|_| err(&format!("bad exponent {k:?}")))?
                    } else {
                        return Err(err(&format!("unexpected {tail:?} after x")));
                    };
                    (c, k)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] = coeffs[power]
                .checked_add(sign * coef)
                .ok_or_else(|| err("coefficient overflow"))?
                .rem_euclid(field.modulus() as i64);
        }
        Ok(Poly::from_coeffs(field, &coeffs))
    }

    /// Comma-separated ascending coefficients, the inverse of the first
    /// [`Poly::parse`] form.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    #[track_caller]
    fn same_field(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let v = c.value();
            match (k, v) {
                (0, _) => write!(f, "{v}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{v}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{v}x^{k}")?,
            }
        }
        Ok(())
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a degree-`d` polynomial `f` is irreducible iff
/// `x^(p^d) = x mod f` and `gcd(x^(p^(d/r)) - x, f) = 1` for each prime `r | d`.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(d) = f.degree() else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let field = f.field();
    let f = f.monic();
    let p = field.modulus() as u64;
    let x = Poly::x(field);
    // frob[k] = x^(p^k) mod f
    let mut frob = Vec::with_capacity(d + 1);
    frob.push(x.rem(&f).expect("f nonzero"));
    for k in 1..=d {
        let next = frob[k - 1].pow_mod(p, &f).expect("f nonzero");
        frob.push(next);
    }
    if frob[d] != frob[0] {
        return false;
    }
    prime_divisors(d)
        .into_iter()
        .all(|r| frob[d / r].sub(&x).gcd(&f).is_one())
}

/// All monic irreducibles of degree `d`, ordered by the integer
/// `c_0 + c_1 p + ... + c_{d-1} p^{d-1}` of their lower coefficients.
pub fn enumerate_irreducibles(
    field: PrimeField,
    d: usize,
    limit: u64,
) -> Result<Vec<Poly>, PolyError> {
    if d == 0 {
        return Err(PolyError::ZeroDegree);
    }
    let p = field.modulus() as u128;
    let candidates = (0..d)
        .try_fold(1u128, |acc, _| acc.checked_mul(p))
        .unwrap_or(u128::MAX);
    if candidates > limit as u128 {
        return Err(PolyError::LimitExceeded { candidates, limit });
    }
    let mut out = Vec::new();
    let mut coeffs = vec![FieldElement::ZERO; d + 1];
    coeffs[d] = FieldElement::ONE;
    for mut idx in 0..candidates as u64 {
        for c in coeffs.iter_mut().take(d) {
            *c = field.elem((idx % p as u64) as i64);
            idx /= p as u64;
        }
        let f = Poly::new(field, coeffs.clone());
        if is_irreducible(&f) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Rejection sampling: uniform monic degree-`d` candidates until one is
/// irreducible. About `d` draws on average.
pub fn random_irreducible<R: Rng + ?Sized>(
    rng: &mut R,
    field: PrimeField,
    d: usize,
) -> Result<Poly, PolyError> {
    if d == 0 {
        return Err(PolyError::ZeroDegree);
    }
    loop {
        let mut coeffs = field.random_vector(rng, d);
        coeffs.push(FieldElement::ONE);
        let f = Poly::new(field, coeffs);
        if is_irreducible(&f) {
            return Ok(f);
        }
    }
}

/// A finite prefix `(s_0, s_1, ...)` of a scalar sequence over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSequence {
    field: PrimeField,
    terms: Vec<FieldElement>,
}

impl ScalarSequence {
    pub fn new(field: PrimeField, terms: Vec<FieldElement>) -> Result<Self, PolyError> {
        if terms.is_empty() {
            return Err(PolyError::EmptySequence);
        }
        Ok(Self { field, terms })
    }

    pub fn from_values(field: PrimeField, values: &[i64]) -> Result<Self, PolyError> {
        Self::new(field, values.iter().map(|&v| field.elem(v)).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn terms(&self) -> &[FieldElement] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }
}

/// `f(S)`: the sequence whose `k`-th term is `sum_i f_i S_{i+k}`.
///
/// The result has `len(S) - deg(f)` terms. The zero polynomial maps `S` to
/// the zero sequence of the same length.
pub fn apply_poly_to_sequence(f: &Poly, s: &ScalarSequence) -> Result<ScalarSequence, PolyError> {
    let field = s.field;
    let Some(d) = f.degree() else {
        return Ok(ScalarSequence {
            field,
            terms: vec![FieldElement::ZERO; s.len()],
        });
    };
    if s.len() < d + 1 {
        return Err(PolyError::SequenceTooShort {
            len: s.len(),
            degree: d,
        });
    }
    let terms = (0..s.len() - d)
        .map(|k| {
            f.coeffs()
                .iter()
                .zip(&s.terms[k..])
                .fold(FieldElement::ZERO, |acc, (&c, &t)| field.mul_add(acc, c, t))
        })
        .collect();
    Ok(ScalarSequence { field, terms })
}

/// Monic minimal generating polynomial of `s` by Berlekamp–Massey.
///
/// Correct for the infinite extension of `s` whenever `s.len() >= 2 * deg`
/// of the true generator; otherwise it is the shortest generator of the
/// prefix.
pub fn berlekamp_massey(s: &ScalarSequence) -> Poly {
    let f = s.field;
    let terms = &s.terms;
    // connection polynomial C(x) = 1 + c_1 x + ... + c_L x^L
    let mut conn = vec![FieldElement::ONE];
    let mut prev = vec![FieldElement::ONE];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut prev_disc = FieldElement::ONE;

    for i in 0..terms.len() {
        let disc = (1..=len).fold(terms[i], |acc, j| {
            f.mul_add(acc, conn.get(j).copied().unwrap_or_default(), terms[i - j])
        });
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let coef = f
            .div(disc, prev_disc)
            .expect("previous discrepancy is nonzero");
        let saved = conn.clone();
        if conn.len() < prev.len() + shift {
            conn.resize(prev.len() + shift, FieldElement::ZERO);
        }
        for (j, &b) in prev.iter().enumerate() {
            conn[j + shift] = f.sub(conn[j + shift], f.mul(coef, b));
        }
        if 2 * len <= i {
            len = i + 1 - len;
            prev = saved;
            prev_disc = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    // generator g(x) = x^L C(1/x)
    let mut gen = vec![FieldElement::ZERO; len + 1];
    for (j, g) in gen.iter_mut().enumerate() {
        *g = conn.get(len - j).copied().unwrap_or_default();
    }
    Poly::new(f, gen)
}

/// A `b x b` array of scalar sequences, row-major: entry `(i, j)` holds
/// `(S_0[i][j], S_1[i][j], ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSequence {
    b: usize,
    entries: Vec<ScalarSequence>,
}

impl BlockSequence {
    pub fn new(b: usize, entries: Vec<ScalarSequence>) -> Result<Self, PolyError> {
        if b == 0 || entries.len() != b * b {
            return Err(PolyError::Shape(format!(
                "{} entries for block size {b}",
                entries.len()
            )));
        }
        let (len, field) = (entries[0].len(), entries[0].field());
        if entries.iter().any(|e| e.len() != len || e.field() != field) {
            return Err(PolyError::Shape("entries differ in length or field".into()));
        }
        Ok(Self { b, entries })
    }

    pub fn block_size(&self) -> usize {
        self.b
    }

    pub fn len(&self) -> usize {
        self.entries[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarSequence {
        &self.entries[i * self.b + j]
    }

    pub fn entries(&self) -> &[ScalarSequence] {
        &self.entries
    }
}

/// Minimal generating polynomial of a matrix sequence: the lcm of the
/// entrywise scalar minimal polynomials.
pub fn minpoly_block_sequence(block: &BlockSequence) -> Poly {
    let field = block.entries[0].field();
    block
        .entries
        .iter()
        .map(berlekamp_massey)
        .fold(Poly::one(field), |acc, g| acc.lcm(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::seeded_rng;
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn gcd_and_lcm() {
        let f = Poly::from_coeffs(f7(), &[6, 3, 1]);
        let g = Poly::from_coeffs(f7(), &[4, 1]);
        assert!(f.gcd(&g).is_one());
        assert_eq!(f.scale(f7().elem(3)).gcd(&f), f);
        let l = Poly::x(f2()).lcm(&Poly::from_coeffs(f2(), &[1, 1]));
        assert_eq!(l, Poly::from_coeffs(f2(), &[0, 1, 1]));
        assert_eq!(
            Poly::one(f7()).div_rem(&Poly::zero(f7())),
            Err(PolyError::DivisionByZero)
        );
    }

    #[test]
    fn parse_both_forms() {
        let a = Poly::parse(f7(), "6,3,1").unwrap();
        let b = Poly::parse(f7(), "x^2+3x+6").unwrap();
        let c = Poly::parse(f7(), "x^2 - 4*x - 1").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.to_string(), "x^2+3x+6");
        assert_eq!(a.to_coeff_string(), "6,3,1");
        assert_eq!(Poly::parse(f7(), "x").unwrap(), Poly::x(f7()));
        assert!(Poly::parse(f7(), "x^").is_err());
        assert!(Poly::parse(f7(), "").is_err());
        assert!(Poly::parse(f7(), "1,,2").is_err());
    }

    #[test]
    fn sequence_action() {
        let s = ScalarSequence::from_values(f7(), &[2, 5, 1]).unwrap();
        assert_eq!(apply_poly_to_sequence(&Poly::one(f7()), &s).unwrap(), s);
        let shifted = apply_poly_to_sequence(&Poly::x(f7()), &s).unwrap();
        assert_eq!(shifted, ScalarSequence::from_values(f7(), &[5, 1]).unwrap());
        let fib2 = ScalarSequence::from_values(f2(), &[0, 1, 1, 0, 1, 1, 0, 1, 1]).unwrap();
        let out = apply_poly_to_sequence(&Poly::from_coeffs(f2(), &[1, 1, 1]), &fib2).unwrap();
        assert!(out.is_zero());
        assert_eq!(out.len(), 7);
        let short = ScalarSequence::from_values(f7(), &[1, 2]).unwrap();
        assert_eq!(
            apply_poly_to_sequence(&Poly::from_coeffs(f7(), &[1, 1, 1]), &short),
            Err(PolyError::SequenceTooShort { len: 2, degree: 2 })
        );
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&Poly::from_coeffs(f7(), &[6, 3, 1])));
        assert!(is_irreducible(&Poly::from_coeffs(f2(), &[1, 1, 1])));
        assert!(!is_irreducible(&Poly::from_coeffs(f2(), &[0, 0, 1])));
        assert!(!is_irreducible(&Poly::from_coeffs(f2(), &[1, 0, 1])));
        // (x^2+x+1)^2 has no roots but is reducible
        assert!(!is_irreducible(&Poly::from_coeffs(f2(), &[1, 0, 1, 0, 1])));
        assert!(!is_irreducible(&Poly::one(f2())));
    }

    #[test]
    fn small_enumerations() {
        let lin = enumerate_irreducibles(f2(), 1, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(lin, vec![Poly::x(f2()), Poly::from_coeffs(f2(), &[1, 1])]);
        let quad = enumerate_irreducibles(f2(), 2, DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert_eq!(quad, vec![Poly::from_coeffs(f2(), &[1, 1, 1])]);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(
            enumerate_irreducibles(f3, 2, DEFAULT_ENUMERATION_LIMIT)
                .unwrap()
                .len(),
            3
        );
        assert!(matches!(
            enumerate_irreducibles(f7(), 8, DEFAULT_ENUMERATION_LIMIT),
            Err(PolyError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn random_irreducibles() {
        let f = random_irreducible(&mut seeded_rng(1), f2(), 2).unwrap();
        assert_eq!(f, Poly::from_coeffs(f2(), &[1, 1, 1]));
        let a = random_irreducible(&mut seeded_rng(9), f7(), 5).unwrap();
        let b = random_irreducible(&mut seeded_rng(9), f7(), 5).unwrap();
        assert_eq!(a, b);
        assert!(is_irreducible(&a));
        assert_eq!(a.degree(), Some(5));
    }

    #[test]
    fn berlekamp_massey_examples() {
        let mut fib = vec![0i64, 1];
        while fib.len() < 12 {
            let n = fib.len();
            fib.push((fib[n - 1] + fib[n - 2]) % 7);
        }
        let s = ScalarSequence::from_values(f7(), &fib).unwrap();
        let g = berlekamp_massey(&s);
        assert_eq!(g, Poly::from_coeffs(f7(), &[6, 6, 1]));
        assert!(apply_poly_to_sequence(&g, &s).unwrap().is_zero());

        let zeros = ScalarSequence::from_values(f7(), &[0; 8]).unwrap();
        assert!(berlekamp_massey(&zeros).is_one());

        let consts = ScalarSequence::from_values(f7(), &[4; 8]).unwrap();
        assert_eq!(berlekamp_massey(&consts), Poly::from_coeffs(f7(), &[-1, 1]));

        // x^2 divides the generator: sequence (1, 0, 0, ...)
        let impulse = ScalarSequence::from_values(f7(), &[1, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(berlekamp_massey(&impulse), Poly::x(f7()));
        let late = ScalarSequence::from_values(f7(), &[0, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(berlekamp_massey(&late), Poly::x(f7()).pow(2));
    }

    #[test]
    fn block_minpoly_degenerate_cases() {
        let s = ScalarSequence::from_values(f7(), &[1, 3, 2, 6, 4, 5]).unwrap();
        let single = BlockSequence::new(1, vec![s.clone()]).unwrap();
        assert_eq!(minpoly_block_sequence(&single), berlekamp_massey(&s));
        let zero = ScalarSequence::from_values(f7(), &[0; 6]).unwrap();
        let zeros = BlockSequence::new(2, vec![zero; 4]).unwrap();
        assert!(minpoly_block_sequence(&zeros).is_one());
        assert!(BlockSequence::new(2, vec![s]).is_err());
    }

    fn poly_strategy(p: u64, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..p as i64, 1..=max_len)
            .prop_map(move |c| Poly::from_coeffs(PrimeField::new(p).unwrap(), &c))
    }

    proptest! {
        #[test]
        fn action_is_multiplicative(
            f in poly_strategy(5, 4),
            g in poly_strategy(5, 4),
            s in prop::collection::vec(0..5i64, 12..20),
        ) {
            let s = ScalarSequence::from_values(PrimeField::new(5).unwrap(), &s).unwrap();
            let fg = apply_poly_to_sequence(&f.mul(&g), &s).unwrap();
            let nested = apply_poly_to_sequence(&f, &apply_poly_to_sequence(&g, &s).unwrap()).unwrap();
            if f.is_zero() || g.is_zero() {
                prop_assert!(fg.is_zero() && nested.is_zero());
            } else {
                prop_assert_eq!(fg, nested);
            }
        }

        #[test]
        fn berlekamp_massey_annihilates(s in prop::collection::vec(0..7i64, 1..24)) {
            let s = ScalarSequence::from_values(f7(), &s).unwrap();
            let g = berlekamp_massey(&s);
            prop_assert!(g.is_monic());
            if g.degree().unwrap() < s.len() {
                prop_assert!(apply_poly_to_sequence(&g, &s).unwrap().is_zero());
            }
        }

        #[test]
        fn gcd_lcm_product(f in poly_strategy(3, 5), g in poly_strategy(3, 5)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assert_eq!(f.gcd(&g).mul(&f.lcm(&g)), f.mul(&g).monic());
            let (q, r) = f.div_rem(&g).unwrap();
            prop_assert_eq!(q.mul(&g).add(&r), f);
        }
    }
}
