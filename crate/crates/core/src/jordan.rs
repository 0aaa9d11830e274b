//! Generalized Jordan forms built from elementary divisors, applied as black
//! boxes, plus the structural matrices (Hankel transform, regular
//! representation, Krylov matrix) that relate companion-matrix projections to
//! the extension field `F_q[x]/<f>`.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactprob::count_irreducibles_u64;
use crate::field::{FieldElement, FieldError, Matrix, PrimeField};
use crate::poly::{
    enumerate_irreducibles, is_irreducible, random_irreducible, BlockSequence, Poly, PolyError,
    ScalarSequence, DEFAULT_ENUMERATION_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("field size q = {0} must be at least 2")]
    FieldTooSmall(u64),
    #[error("spec has no blocks (n must be at least 1)")]
    Empty,
    #[error("block {index}: exponent list is empty")]
    NoExponents { index: usize },
    #[error("block {index}: exponents must be positive")]
    ZeroExponent { index: usize },
    #[error("block {index}: exponents must be nonincreasing, got {exps:?}")]
    ExponentsNotSorted { index: usize, exps: Vec<u32> },
    #[error("block {index}: degree must be at least 1")]
    ZeroDegree { index: usize },
    #[error("block {index}: {poly} is not monic")]
    NotMonic { index: usize, poly: String },
    #[error("block {index}: {poly} is not irreducible over F_{q}")]
    NotIrreducible { index: usize, poly: String, q: u64 },
    #[error("block {index}: degree {given} disagrees with polynomial of degree {actual}")]
    DegreeMismatch {
        index: usize,
        given: usize,
        actual: usize,
    },
    #[error("irreducible {poly} appears in more than one block; irreducibles must be distinct")]
    DuplicateIrreducible { poly: String },
    #[error("explicit polynomials need a prime field, but q = {0}")]
    ExplicitNeedsPrimeField(u64),
    #[error("spec needs {needed} distinct irreducibles of degree {degree} over F_{q}, only {available} exist")]
    InsufficientIrreducibles {
        q: u64,
        degree: usize,
        needed: u64,
        available: u64,
    },
    #[error("spec has degree-only blocks; explicit irreducibles are required here")]
    Unresolved,
    #[error("polynomial {0} is not monic")]
    PolyNotMonic(String),
    #[error("block: {0}")]
    Field(#[from] FieldError),
    #[error("block: {0}")]
    Poly(#[from] PolyError),
    #[error("invalid spec JSON: {0}")]
    Json(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// One primary component: an irreducible `f` (or just its degree) and the
/// exponents of its Jordan blocks, largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryComponent {
    poly: Option<Poly>,
    degree: usize,
    exps: Vec<u32>,
}

impl PrimaryComponent {
    pub fn explicit(poly: Poly, exps: Vec<u32>) -> Self {
        let degree = poly.degree().unwrap_or(0);
        Self {
            poly: Some(poly),
            degree,
            exps,
        }
    }

    pub fn degree_only(degree: usize, exps: Vec<u32>) -> Self {
        Self {
            poly: None,
            degree,
            exps,
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        self.poly.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Largest exponent `e_1`.
    pub fn top_exponent(&self) -> u32 {
        self.exps[0]
    }

    /// Number of exponents equal to the largest one.
    pub fn multiplicity(&self) -> usize {
        self.exps.iter().take_while(|&&e| e == self.exps[0]).count()
    }

    pub fn dimension(&self) -> usize {
        self.degree * self.exps.iter().map(|&e| e as usize).sum::<usize>()
    }
}

/// The multiset of elementary divisors `f_i^{e_ij}` that fixes a matrix up to
/// similarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryDivisorSpec {
    q: u64,
    components: Vec<PrimaryComponent>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    q: u64,
    blocks: Vec<RawBlock>,
}

#[derive(Serialize, Deserialize)]
struct RawBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    exps: Vec<u32>,
}

impl ElementaryDivisorSpec {
    pub fn new(q: u64, components: Vec<PrimaryComponent>) -> Result<Self, SpecError> {
        let spec = Self { q, components };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), SpecError> {
        if self.q < 2 {
            return Err(SpecError::FieldTooSmall(self.q));
        }
        if self.components.is_empty() {
            return Err(SpecError::Empty);
        }
        let mut seen = Vec::new();
        for (index, c) in self.components.iter().enumerate() {
            if c.exps.is_empty() {
                return Err(SpecError::NoExponents { index });
            }
            if c.exps.contains(&0) {
                return Err(SpecError::ZeroExponent { index });
            }
            if c.exps.windows(2).any(|w| w[0] < w[1]) {
                return Err(SpecError::ExponentsNotSorted {
                    index,
                    exps: c.exps.clone(),
                });
            }
            if c.degree == 0 {
                return Err(SpecError::ZeroDegree { index });
            }
            if let Some(f) = &c.poly {
                if f.field().modulus() as u64 != self.q {
                    return Err(SpecError::ExplicitNeedsPrimeField(self.q));
                }
                if !f.is_monic() {
                    return Err(SpecError::NotMonic {
                        index,
                        poly: f.to_string(),
                    });
                }
                if f.degree() != Some(c.degree) {
                    return Err(SpecError::DegreeMismatch {
                        index,
                        given: c.degree,
                        actual: f.degree().unwrap_or(0),
                    });
                }
                if !is_irreducible(f) {
                    return Err(SpecError::NotIrreducible {
                        index,
                        poly: f.to_string(),
                        q: self.q,
                    });
                }
                if seen.contains(&f) {
                    return Err(SpecError::DuplicateIrreducible {
                        poly: f.to_string(),
                    });
                }
                seen.push(f);
            }
        }
        let mut per_degree: HashMap<usize, u64> = HashMap::new();
        for c in &self.components {
            *per_degree.entry(c.degree).or_default() += 1;
        }
        for (&degree, &needed) in &per_degree {
            let available = count_irreducibles_u64(self.q, degree as u32);
            if needed > available {
                return Err(SpecError::InsufficientIrreducibles {
                    q: self.q,
                    degree,
                    needed,
                    available,
                });
            }
        }
        Ok(())
    }

    /// Parses the JSON spec format, e.g.
    /// `{"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]}, {"degree": 1, "exps": [2, 1]}]}`.
    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let raw: RawSpec =
            serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
        if raw.q < 2 {
            return Err(SpecError::FieldTooSmall(raw.q));
        }
        let mut components = Vec::with_capacity(raw.blocks.len());
        for (index, block) in raw.blocks.into_iter().enumerate() {
            let component = match (block.poly, block.degree) {
                (Some(text), degree) => {
                    let field = PrimeField::new(raw.q)
                        .map_err(|_| SpecError::ExplicitNeedsPrimeField(raw.q))?;
                    let f = Poly::parse(field, &text)?;
                    let actual = f.degree().unwrap_or(0);
                    if let Some(given) = degree.filter(|&g| g != actual) {
                        return Err(SpecError::DegreeMismatch {
                            index,
                            given,
                            actual,
                        });
                    }
                    PrimaryComponent::explicit(f, block.exps)
                }
                (None, Some(d)) => PrimaryComponent::degree_only(d, block.exps),
                (None, None) => {
                    return Err(SpecError::Json(format!(
                        "block {index}: needs \"poly\" or \"degree\""
                    )))
                }
            };
            components.push(component);
        }
        Self::new(raw.q, components)
    }

    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            q: self.q,
            blocks: self
                .components
                .iter()
                .map(|c| RawBlock {
                    poly: c.poly.as_ref().map(Poly::to_coeff_string),
                    degree: c.poly.is_none().then_some(c.degree),
                    exps: c.exps.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("spec serializes")
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn components(&self) -> &[PrimaryComponent] {
        &self.components
    }

    /// Matrix dimension `n = sum_i sum_j d_i e_ij`.
    pub fn dimension(&self) -> usize {
        self.components
            .iter()
            .map(PrimaryComponent::dimension)
            .sum()
    }

    pub fn is_resolved(&self) -> bool {
        self.components.iter().all(|c| c.poly.is_some())
    }

    /// Degree of the minimal polynomial, `sum_i d_i e_i1`.
    pub fn minpoly_degree(&self) -> usize {
        self.components
            .iter()
            .map(|c| c.degree * c.top_exponent() as usize)
            .sum()
    }

    /// Fills degree-only components with distinct irreducibles, avoiding the
    /// explicit ones already present.
    pub fn resolve<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Self, SpecError> {
        if self.is_resolved() {
            return Ok(self.clone());
        }
        let field =
            PrimeField::new(self.q).map_err(|_| SpecError::ExplicitNeedsPrimeField(self.q))?;
        let mut used: Vec<Poly> = self
            .components
            .iter()
            .filter_map(|c| c.poly.clone())
            .collect();
        let mut pools: HashMap<usize, Vec<Poly>> = HashMap::new();
        let mut components = Vec::with_capacity(self.components.len());
        for c in &self.components {
            if c.poly.is_some() {
                components.push(c.clone());
                continue;
            }
            let d = c.degree;
            let small = (field.modulus() as u128)
                .checked_pow(d as u32)
                .is_some_and(|v| v <= DEFAULT_ENUMERATION_LIMIT as u128);
            let f = if small {
                let pool = match pools.entry(d) {
                    std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                    std::collections::hash_map::Entry::Vacant(e) => {
                        let mut all = enumerate_irreducibles(field, d, DEFAULT_ENUMERATION_LIMIT)?;
                        all.retain(|f| !used.contains(f));
                        all.shuffle(rng);
                        e.insert(all)
                    }
                };
                pool.pop().ok_or(SpecError::InsufficientIrreducibles {
                    q: self.q,
                    degree: d,
                    needed: self.components.iter().filter(|o| o.degree == d).count() as u64,
                    available: count_irreducibles_u64(self.q, d as u32),
                })?
            } else {
                loop {
                    let f = random_irreducible(rng, field, d)?;
                    if !used.contains(&f) {
                        break f;
                    }
                }
            };
            used.push(f.clone());
            components.push(PrimaryComponent::explicit(f, c.exps.clone()));
        }
        Self::new(self.q, components)
    }
}

impl fmt::Display for ElementaryDivisorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let name = c
                    .poly
                    .as_ref()
                    .map_or_else(|| format!("<deg {}>", c.degree), |p| format!("({p})"));
                let exps: Vec<String> = c.exps.iter().map(u32::to_string).collect();
                format!("{name}^[{}]", exps.join(","))
            })
            .collect();
        write!(f, "q={} {{{}}}", self.q, parts.join(", "))
    }
}

/// `minpoly = prod_i f_i^{e_i1}`.
pub fn spec_minpoly(spec: &ElementaryDivisorSpec) -> Result<Poly, SpecError> {
    let field = PrimeField::new(spec.q).map_err(|_| SpecError::ExplicitNeedsPrimeField(spec.q))?;
    spec.components.iter().try_fold(Poly::one(field), |acc, c| {
        let f = c.poly.as_ref().ok_or(SpecError::Unresolved)?;
        Ok(acc.mul(&f.pow(c.top_exponent())))
    })
}

/// The Jordan block `J_{f^e}`: `C_f` on the diagonal, identities on the block
/// subdiagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanBlock {
    poly: Poly,
    exponent: u32,
}

impl JordanBlock {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn size(&self) -> usize {
        self.poly.degree().unwrap_or(0) * self.exponent as usize
    }
}

/// Block-diagonal direct sum of Jordan blocks, stored structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlackBoxMatrix {
    field: PrimeField,
    blocks: Vec<JordanBlock>,
    n: usize,
}

impl BlackBoxMatrix {
    pub fn direct_sum(parts: &[BlackBoxMatrix]) -> Result<Self, SpecError> {
        let field = parts.first().ok_or(SpecError::Empty)?.field;
        if parts.iter().any(|p| p.field != field) {
            return Err(SpecError::DimensionMismatch(
                "blocks over different fields".into(),
            ));
        }
        let blocks: Vec<JordanBlock> = parts
            .iter()
            .flat_map(|p| p.blocks.iter().cloned())
            .collect();
        let n = blocks.iter().map(JordanBlock::size).sum();
        Ok(Self { field, blocks, n })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    /// `y = A x` in `O(n)` field operations per block column.
    pub fn apply_into(&self, x: &[FieldElement], y: &mut [FieldElement]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        let f = self.field;
        let mut offset = 0;
        for block in &self.blocks {
            let d = block.poly.degree().unwrap_or(0);
            let coeffs = block.poly.coeffs();
            for j in 0..block.exponent as usize {
                let base = offset + j * d;
                let xs = &x[base..base + d];
                let last = xs[d - 1];
                // companion: (C x)_0 = -f_0 x_{d-1}, (C x)_i = x_{i-1} - f_i x_{d-1}
                y[base] = f.neg(f.mul(coeffs[0], last));
                for i in 1..d {
                    y[base + i] = f.sub(xs[i - 1], f.mul(coeffs[i], last));
                }
                if j > 0 {
                    for i in 0..d {
                        y[base + i] = f.add(y[base + i], x[base - d + i]);
                    }
                }
            }
            offset += block.size();
        }
    }

    pub fn apply(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>, SpecError> {
        if x.len() != self.n {
            return Err(SpecError::DimensionMismatch(format!(
                "length-{} vector for a {}x{} matrix",
                x.len(),
                self.n,
                self.n
            )));
        }
        let mut y = vec![FieldElement::ZERO; self.n];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// Dense form, for tests and small-dimension cross-checks.
    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.n, self.n);
        let mut e = vec![FieldElement::ZERO; self.n];
        let mut col = vec![FieldElement::ZERO; self.n];
        for c in 0..self.n {
            e[c] = FieldElement::ONE;
            self.apply_into(&e, &mut col);
            for (r, &v) in col.iter().enumerate() {
                m.set(r, c, v);
            }
            e[c] = FieldElement::ZERO;
        }
        m
    }

    /// `prod_f f^{max e}` over the distinct irreducibles present.
    pub fn minpoly(&self) -> Poly {
        let mut top: Vec<(&Poly, u32)> = Vec::new();
        for b in &self.blocks {
            match top.iter_mut().find(|(p, _)| *p == &b.poly) {
                Some(entry) => entry.1 = entry.1.max(b.exponent),
                None => top.push((&b.poly, b.exponent)),
            }
        }
        top.into_iter()
            .fold(Poly::one(self.field), |acc, (p, e)| acc.mul(&p.pow(e)))
    }
}

pub fn companion(f: &Poly) -> Result<BlackBoxMatrix, SpecError> {
    jordan_block(f, 1)
}

/// `J_{f^e}`. Irreducibility of `f` is the caller's concern; only monicity
/// and positive degree are checked.
pub fn jordan_block(f: &Poly, e: u32) -> Result<BlackBoxMatrix, SpecError> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(SpecError::PolyNotMonic(f.to_string()));
    }
    if e == 0 {
        return Err(SpecError::ZeroExponent { index: 0 });
    }
    let block = JordanBlock {
        poly: f.clone(),
        exponent: e,
    };
    let n = block.size();
    Ok(BlackBoxMatrix {
        field: f.field(),
        blocks: vec![block],
        n,
    })
}

/// Resolves placeholders and assembles `oplus_i oplus_j J_{f_i^{e_ij}}` in
/// spec order.
pub fn build<R: Rng + ?Sized>(
    spec: &ElementaryDivisorSpec,
    rng: &mut R,
) -> Result<(ElementaryDivisorSpec, BlackBoxMatrix), SpecError> {
    let resolved = spec.resolve(rng)?;
    let field = PrimeField::new(resolved.q)?;
    let blocks: Vec<JordanBlock> = resolved
        .components
        .iter()
        .flat_map(|c| {
            let f = c.poly.clone().expect("resolved");
            c.exps.iter().map(move |&e| JordanBlock {
                poly: f.clone(),
                exponent: e,
            })
        })
        .collect();
    let n = blocks.iter().map(JordanBlock::size).sum();
    Ok((resolved, BlackBoxMatrix { field, blocks, n }))
}

/// Builds a spec that is already fully explicit; no randomness needed.
pub fn build_explicit(spec: &ElementaryDivisorSpec) -> Result<BlackBoxMatrix, SpecError> {
    if !spec.is_resolved() {
        return Err(SpecError::Unresolved);
    }
    let mut rng = crate::field::seeded_rng(0);
    Ok(build(spec, &mut rng)?.1)
}

/// The block sequence `U A^k V` for `k = 0..len`, by iterated black-box
/// applies to the columns of `V`.
pub fn project_sequence(
    a: &BlackBoxMatrix,
    u: &Matrix,
    v: &Matrix,
    len: usize,
) -> Result<BlockSequence, SpecError> {
    let n = a.n;
    let b = u.rows();
    if u.cols() != n || v.rows() != n || v.cols() != b {
        return Err(SpecError::DimensionMismatch(format!(
            "U is {}x{}, V is {}x{}, A is {n}x{n}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    if len == 0 {
        return Err(SpecError::DimensionMismatch(
            "sequence length must be positive".into(),
        ));
    }
    let f = a.field;
    let mut cols: Vec<Vec<FieldElement>> = (0..b).map(|j| v.column(j)).collect();
    let mut scratch = vec![FieldElement::ZERO; n];
    let mut terms = vec![Vec::with_capacity(len); b * b];
    for k in 0..len {
        for i in 0..b {
            let row = u.row(i);
            for (j, col) in cols.iter().enumerate() {
                let s = row
                    .iter()
                    .zip(col)
                    .fold(FieldElement::ZERO, |acc, (&x, &y)| f.mul_add(acc, x, y));
                terms[i * b + j].push(s);
            }
        }
        if k + 1 < len {
            for col in &mut cols {
                a.apply_into(col, &mut scratch);
                std::mem::swap(col, &mut scratch);
            }
        }
    }
    let entries = terms
        .into_iter()
        .map(|t| ScalarSequence::new(f, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockSequence::new(b, entries)?)
}

/// Dense `C_f`.
pub fn companion_dense(f: &Poly) -> Result<Matrix, SpecError> {
    Ok(companion(f)?.to_dense())
}

/// `g(M)` by Horner's rule.
pub fn eval_poly_at_matrix(g: &Poly, m: &Matrix) -> Result<Matrix, SpecError> {
    let field = m.field();
    let n = m.rows();
    let id = Matrix::identity(field, n);
    let mut acc = Matrix::zeros(field, n, n);
    for &c in g.coeffs().iter().rev() {
        acc = acc.mul(m)?.add(&id.scale(c))?;
    }
    Ok(acc)
}

/// Krylov matrix `(v, C v, ..., C^{d-1} v)` for square `C`.
pub fn krylov_matrix(c: &Matrix, v: &[FieldElement]) -> Result<Matrix, SpecError> {
    let d = c.rows();
    let mut out = Matrix::zeros(c.field(), d, d);
    let mut w = v.to_vec();
    for j in 0..d {
        for (i, &x) in w.iter().enumerate() {
            out.set(i, j, x);
        }
        w = c.apply(&w)?;
    }
    Ok(out)
}

/// The matrix of multiplication by `v(x) = sum v_j x^j` in `F_p[x]/<f>`
/// with basis `1, x, ..., x^{d-1}`, computed as `sum_j v_j C_f^j`.
pub fn regular_representation(v: &[FieldElement], f: &Poly) -> Result<Matrix, SpecError> {
    let d = f.degree().unwrap_or(0);
    if v.len() != d {
        return Err(SpecError::DimensionMismatch(format!(
            "vector of length {} for a degree-{d} polynomial",
            v.len()
        )));
    }
    let c = companion_dense(f)?;
    let field = f.field();
    let mut power = Matrix::identity(field, d);
    let mut acc = Matrix::zeros(field, d, d);
    for &vj in v {
        acc = acc.add(&power.scale(vj))?;
        power = power.mul(&c)?;
    }
    Ok(acc)
}

/// `P = (-f_0) oplus H_{d-1}(f_2, ..., f_{d-1}, 1, 0, ..., 0)`: symmetric,
/// nonsingular, and `C_f P = P C_f^T`.
pub fn hankel_transform(f: &Poly) -> Result<Matrix, SpecError> {
    if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
        return Err(SpecError::PolyNotMonic(f.to_string()));
    }
    let field = f.field();
    let d = f.degree().expect("nonzero");
    let mut p = Matrix::zeros(field, d, d);
    if f.coeff(0).is_zero() {
        // only f = x is irreducible with f_0 = 0; any nonzero scalar works
        p.set(0, 0, FieldElement::ONE);
        return Ok(p);
    }
    p.set(0, 0, field.neg(f.coeff(0)));
    // Hankel entries a_1..a_{2d-3}: f_2..f_{d-1}, then 1, then zeros.
    let hankel = |k: usize| -> FieldElement {
        // k is 0-based position along the antidiagonals
        if k + 2 < d {
            f.coeff(k + 2)
        } else if k + 2 == d {
            FieldElement::ONE
        } else {
            FieldElement::ZERO
        }
    };
    for i in 0..d - 1 {
        for j in 0..d - 1 {
            p.set(i + 1, j + 1, hankel(i + j));
        }
    }
    Ok(p)
}

/// Nonincreasing partitions of `k` with parts at most `max`.
fn partitions(k: u32, max: u32) -> Vec<Vec<u32>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=k.min(max)).rev() {
        for mut rest in partitions(k - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One representative spec per similarity class of `n x n` matrices over
/// `F_p`: every assignment of a partition to a set of distinct monic
/// irreducibles with total degree `n`.
pub fn similarity_classes(
    field: PrimeField,
    n: usize,
) -> Result<Vec<ElementaryDivisorSpec>, SpecError> {
    let mut irreducibles = Vec::new();
    for d in 1..=n {
        irreducibles.extend(enumerate_irreducibles(field, d, DEFAULT_ENUMERATION_LIMIT)?);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    classes_from(&irreducibles, 0, n, &mut chosen, &mut out);
    out.into_iter()
        .map(|components| ElementaryDivisorSpec::new(u64::from(field.modulus()), components))
        .collect()
}

fn classes_from(
    irreducibles: &[Poly],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<PrimaryComponent>,
    out: &mut Vec<Vec<PrimaryComponent>>,
) {
    if remaining == 0 {
        out.push(chosen.clone());
        return;
    }
    for (j, f) in irreducibles.iter().enumerate().skip(start) {
        let d = f.degree().expect("irreducibles are nonconstant");
        for size in 1..=remaining / d {
            for exps in partitions(size as u32, size as u32) {
                chosen.push(PrimaryComponent::explicit(f.clone(), exps));
                classes_from(irreducibles, j + 1, remaining - d * size, chosen, out);
                chosen.pop();
            }
        }
    }
}
