//! Prime-field arithmetic, dense matrices over `F_p`, and the seeded RNG used
//! for every randomized computation in the crate.

use std::fmt;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest accepted modulus (exclusive). Keeps products below 2^62.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} out of range: need 2 <= p < 2^31")]
    ModulusOutOfRange(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("degenerate matrix dimension {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("elements belong to different fields (F_{0} vs F_{1})")]
    FieldMismatch(u32, u32),
}

/// The prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u32,
}

/// A canonical residue in `[0, p)`. Carries no reference to its field; every
/// operation goes through a [`PrimeField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic primality by trial division; `n < 2^31` so at most ~23k
/// odd divisors are tried.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Returns `Some((p, k))` when `q = p^k` for a prime `p`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(FieldError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Reduces any integer (negative values included) into the field.
    #[inline]
    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 as u64 + b.0 as u64;
        let p = self.p as u64;
        FieldElement(if s >= p { s - p } else { s } as u32)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(a.0 + (self.p - b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.p - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    /// `a + b*c`, the inner-loop operation of every matrix product here.
    #[inline]
    pub fn mul_add(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        FieldElement(((a.0 as u64 + b.0 as u64 * c.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let p = self.p as u64;
        let mut base = a.0 as u64;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FieldElement(acc as u32)
    }

    /// Inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.elem(t0))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Iterates the field elements `0, 1, ..., p-1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.p).map(FieldElement)
    }

    /// Uniform element. `Uniform` over integers uses widening-multiply
    /// rejection sampling, so there is no modulo bias.
    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(Uniform::new(0, self.p).sample(rng))
    }

    pub fn random_vector<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        len: usize,
    ) -> Vec<FieldElement> {
        let dist = Uniform::new(0, self.p);
        (0..len).map(|_| FieldElement(dist.sample(rng))).collect()
    }

    /// Matrix with independent uniform entries, drawn in row-major order.
    pub fn random_matrix<R: rand::Rng + ?Sized>(
        &self,
        rng: &mut R,
        rows: usize,
        cols: usize,
    ) -> Result<Matrix, FieldError> {
        if rows == 0 || cols == 0 {
            return Err(FieldError::EmptyDimension { rows, cols });
        }
        Ok(Matrix {
            field: *self,
            rows,
            cols,
            data: self.random_vector(rng, rows * cols),
        })
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = FieldError;

    fn try_from(p: u64) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p as u64
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Generator behind every randomized operation: ChaCha with 8 rounds.
///
/// Stream-split rule: the generator for Monte-Carlo trial `i` under master
/// seed `s` is `ChaCha8Rng::seed_from_u64(s)` switched to stream `i`. Streams
/// are disjoint, so results do not depend on how trials are partitioned
/// across workers.
pub type SeededRng = ChaCha8Rng;

/// Version tag of the RNG scheme, printed alongside seeds in reports.
pub const RNG_SCHEME: &str = "chacha8-stream-v1";

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn trial_rng(master_seed: u64, trial: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = FieldElement::ONE;
        }
        m
    }

    pub fn from_vec(
        field: PrimeField,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self, FieldError> {
        if data.len() != rows * cols {
            return Err(FieldError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows, reducing each entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self, FieldError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(FieldError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.elem(v)).collect();
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_slice(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(FieldError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.mul_add(out.data[idx], a, other.get(k, j));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, FieldError> {
        self.add(&other.scale(self.field.neg(FieldElement::ONE)))
    }

    pub fn scale(&self, s: FieldElement) -> Matrix {
        let f = self.field;
        Matrix {
            data: self.data.iter().map(|&a| f.mul(a, s)).collect(),
            ..*self
        }
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::DimensionMismatch(format!(
                "{}x{} matrix applied to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElement::ZERO, |acc, (&a, &x)| f.mul_add(acc, a, x))
            })
            .collect())
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.clone().row_reduce().1
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Gauss-Jordan inverse; `None` when singular or not square.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        let mut aug = Matrix::zeros(f, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, FieldElement::ONE);
        }
        let (reduced, rank) = aug.row_reduce();
        if rank < n || (0..n).any(|i| reduced.get(i, i) != FieldElement::ONE) {
            return None;
        }
        let mut inv = Matrix::zeros(f, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, reduced.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// Reduced row echelon form and rank.
    fn row_reduce(mut self) -> (Matrix, usize) {
        let f = self.field;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(pivot * self.cols + c, rank * self.cols + c);
            }
            let inv = f.inv(self.get(rank, col)).expect("pivot is nonzero");
            for c in 0..self.cols {
                let v = f.mul(self.get(rank, c), inv);
                self.set(rank, c, v);
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in 0..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(rank, c)));
                    self.set(r, c, v);
                }
            }
            rank += 1;
        }
        (self, rank)
    }

    fn check_field(&self, other: &Matrix) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction() {
        assert_eq!(PrimeField::new(7).unwrap().modulus(), 7);
        assert_eq!(PrimeField::new(2).unwrap().modulus(), 2);
        assert_eq!(PrimeField::new(4), Err(FieldError::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(FieldError::ModulusOutOfRange(1)));
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(1 << 31).is_err());
    }

    #[test]
    fn small_arithmetic() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.mul(f7.elem(3), f7.elem(5)), f7.elem(1));
        assert_eq!(f7.inv(f7.elem(3)).unwrap(), f7.elem(5));
        assert_eq!(f7.inv(f7.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(f7.elem(-3), f7.elem(4));
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.add(f2.one(), f2.one()), f2.zero());
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn random_matrix_is_seed_deterministic() {
        let f2 = PrimeField::new(2).unwrap();
        let a = f2.random_matrix(&mut seeded_rng(17), 1, 2).unwrap();
        let b = f2.random_matrix(&mut seeded_rng(17), 1, 2).unwrap();
        assert_eq!(a, b);
        let s1: Vec<_> = (0..4)
            .map(|t| f2.random_matrix(&mut trial_rng(3, t), 3, 3).unwrap())
            .collect();
        let s2: Vec<_> = (0..4)
            .map(|t| f2.random_matrix(&mut trial_rng(3, t), 3, 3).unwrap())
            .collect();
        assert_eq!(s1, s2);
    }

    #[test]
    fn degenerate_dimension_rejected() {
        let f = PrimeField::new(7).unwrap();
        assert!(matches!(
            f.random_matrix(&mut seeded_rng(0), 0, 3),
            Err(FieldError::EmptyDimension { .. })
        ));
    }

    /// Pearson chi-square over the 7 outcomes of each cell of a 2x2 matrix,
    /// 10^5 draws. Critical value for 6 degrees of freedom at alpha=0.001 is
    /// 22.458.
    #[test]
    fn random_matrix_is_uniform() {
        let f = PrimeField::new(7).unwrap();
        let mut rng = seeded_rng(2024);
        let draws = 100_000;
        let mut counts = [[0u32; 7]; 4];
        for _ in 0..draws {
            let m = f.random_matrix(&mut rng, 2, 2).unwrap();
            for (cell, e) in m.as_slice().iter().enumerate() {
                counts[cell][e.value() as usize] += 1;
            }
        }
        let expected = draws as f64 / 7.0;
        for cell in counts {
            let chi2: f64 = cell
                .iter()
                .map(|&c| (c as f64 - expected).powi(2) / expected)
                .sum();
            assert!(chi2 < 22.458, "chi2 = {chi2}");
        }
    }

    #[test]
    fn inverse_and_rank() {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_rows(f, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f, 2));
        let singular = Matrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
    }

    fn primes() -> impl Strategy<Value = PrimeField> {
        prop::sample::select(vec![2u64, 3, 5, 7, 13, 65_537, 2_147_483_647])
            .prop_map(|p| PrimeField::new(p).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms(f in primes(), a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
        }
    }
}
