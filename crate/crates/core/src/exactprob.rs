//! Exact rational evaluation of the projection success probabilities.
//!
//! Everything here is arithmetic in `q`, the field cardinality, so `q` may be
//! any integer `>= 2` (prime powers are the meaningful case; see
//! [`crate::field::prime_power`]). Block projections of `k` copies of a
//! companion matrix `C_f` with `deg f = d` behave like sums of `k` random
//! rank-one `b x b` matrices over a field with `Q = q^d` elements; the
//! projection fails exactly when that sum is zero.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::jordan::ElementaryDivisorSpec;

/// Default largest `n` accepted by [`pmpmin_exact`].
pub const DEFAULT_EXACT_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("exact evaluation for n = {n} exceeds the limit {limit}; use the log-space variant")]
    ExactLimitExceeded { n: u64, limit: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// A probability held as an exact rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn new(value: BigRational) -> Self {
        debug_assert!(
            !value.is_negative() && value <= BigRational::one(),
            "{value} outside [0, 1]"
        );
        Self(value)
    }

    pub fn from_ratio(num: u64, den: u64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn complement(&self) -> ExactProb {
        Self(BigRational::one() - &self.0)
    }

    pub fn product(&self, other: &ExactProb) -> ExactProb {
        Self(&self.0 * &other.0)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal string with `digits` places after the point, rounded half to
    /// even.
    pub fn to_decimal(&self, digits: usize) -> String {
        let num = self.0.numer().magnitude();
        let den = self.0.denom().magnitude();
        let scale = BigUint::from(10u32).pow(digits as u32);
        let (mut q, r) = (num * &scale).div_rem(den);
        let twice = r * 2u32;
        if twice > *den || (twice == *den && q.is_odd()) {
            q += 1u32;
        }
        let s = q.to_str_radix(10);
        if digits == 0 {
            return s;
        }
        let s = format!("{s:0>width$}", width = digits + 1);
        let (int, frac) = s.split_at(s.len() - digits);
        format!("{int}.{frac}")
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Moebius function.
pub fn mobius(mut a: u64) -> i8 {
    assert!(a >= 1, "mobius is defined on positive integers");
    let mut sign = 1i8;
    let mut p = 2u64;
    while p * p <= a {
        if a.is_multiple_of(p) {
            a /= p;
            if a.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if a > 1 {
        sign = -sign;
    }
    sign
}

/// Number of monic irreducible polynomials of degree `m` over a field of `q`
/// elements: `L_q(m) = (1/m) sum_{d | m} mu(m/d) q^d`.
pub fn count_irreducibles(q: u64, m: u32) -> BigUint {
    assert!(m >= 1, "degree must be positive");
    let qb = BigInt::from(q);
    let total: BigInt = (1..=m)
        .filter(|d| m.is_multiple_of(*d))
        .map(|d| BigInt::from(mobius((m / d) as u64)) * Pow::pow(&qb, d))
        .sum();
    let (quot, rem) = total.div_rem(&BigInt::from(m));
    debug_assert!(rem.is_zero());
    quot.to_biguint().expect("count is nonnegative")
}

/// [`count_irreducibles`] saturated to `u64`.
pub fn count_irreducibles_u64(q: u64, m: u32) -> u64 {
    count_irreducibles(q, m).to_u64().unwrap_or(u64::MAX)
}

/// One-step transition probabilities for a rank-one update of a rank-`r`
/// matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankStep {
    /// rank drops to `r - 1`
    pub down: BigRational,
    /// rank rises to `r + 1`
    pub up: BigRational,
    /// rank unchanged
    pub stay: BigRational,
}

/// `D`, `U`, `N` for a `rows x cols` rank-`r` matrix plus a uniform outer
/// product over a field of `ext` elements.
fn rank_step_rect(ext: &BigUint, rows: usize, cols: usize, r: usize) -> RankStep {
    assert!(r <= rows.min(cols));
    let one = BigUint::one();
    let total = Pow::pow(ext, (rows + cols) as u32);
    let down = if r == 0 {
        BigRational::zero()
    } else {
        let num = Pow::pow(ext, (r - 1) as u32) * (Pow::pow(ext, r as u32) - &one);
        BigRational::new(num.into(), total.into())
    };
    let up_num =
        (Pow::pow(ext, (rows - r) as u32) - &one) * (Pow::pow(ext, (cols - r) as u32) - &one);
    let up_den = Pow::pow(ext, (rows + cols - 2 * r) as u32);
    let up = BigRational::new(up_num.into(), up_den.into());
    let stay = BigRational::one() - &down - &up;
    RankStep { down, up, stay }
}

/// `D(r)`, `U(r)`, `N(r)` for square `b x b` blocks over a field of `ext`
/// elements:
/// `D = ext^{r-1}(ext^r - 1)/ext^{2b}`, `U = (ext^{b-r} - 1)^2/ext^{2(b-r)}`,
/// `N = 1 - D - U`.
pub fn dun(ext: &BigUint, b: usize, r: usize) -> RankStep {
    rank_step_rect(ext, b, b, r)
}

/// Law of the rank of a sum of `t` uniform rank-one `b x b` matrices over a
/// field of `ext` elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDistribution {
    ext: BigUint,
    b: usize,
    t: usize,
    probs: Vec<BigRational>,
}

impl RankDistribution {
    pub fn ext(&self) -> &BigUint {
        &self.ext
    }

    pub fn block_size(&self) -> usize {
        self.b
    }

    pub fn terms(&self) -> usize {
        self.t
    }

    /// Probabilities indexed by rank `0..=min(t, b)`.
    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn prob(&self, r: usize) -> BigRational {
        self.probs.get(r).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_mass(&self) -> BigRational {
        self.probs.iter().sum()
    }
}

fn rank_distribution_rect(ext: &BigUint, rows: usize, cols: usize, t: usize) -> Vec<BigRational> {
    let top = rows.min(cols);
    let steps: Vec<RankStep> = (0..=top)
        .map(|r| rank_step_rect(ext, rows, cols, r))
        .collect();
    let mut probs = vec![BigRational::zero(); top + 1];
    probs[0] = BigRational::one();
    for step in 0..t {
        let reach = (step + 1).min(top);
        let mut next = vec![BigRational::zero(); top + 1];
        for r in 0..=reach {
            let mut acc = &probs[r] * &steps[r].stay;
            if r > 0 {
                acc += &probs[r - 1] * &steps[r - 1].up;
            }
            if r < top {
                acc += &probs[r + 1] * &steps[r + 1].down;
            }
            next[r] = acc;
        }
        probs = next;
    }
    probs.truncate(t.min(top) + 1);
    probs
}

/// `Q_t(r)` by `t` steps of
/// `Q_t(r) = Q_{t-1}(r-1) U(r-1) + Q_{t-1}(r) N(r) + Q_{t-1}(r+1) D(r+1)`.
pub fn rank_distribution(ext: &BigUint, b: usize, t: usize) -> RankDistribution {
    assert!(b >= 1, "block size must be positive");
    RankDistribution {
        ext: ext.clone(),
        b,
        t,
        probs: rank_distribution_rect(ext, b, b, t),
    }
}

/// `1 - Q_{q^d, b, s}(0)`: success probability for a primary component whose
/// top exponent occurs `s` times.
pub fn component_success(q: u64, d: usize, s: usize, b: usize) -> ExactProb {
    let ext = Pow::pow(&BigUint::from(q), d as u32);
    let dist = rank_distribution(&ext, b, s);
    ExactProb::new(BigRational::one() - dist.prob(0))
}

/// Success probability for a matrix with the given elementary divisors:
/// `prod_i (1 - Q_{q^{d_i}, b, s_i}(0))`. Only `q`, `d_i` and `s_i` matter.
pub fn pmp_exact(spec: &ElementaryDivisorSpec, b: usize) -> ExactProb {
    assert!(b >= 1, "block size must be positive");
    let mut memo: HashMap<(usize, usize), ExactProb> = HashMap::new();
    spec.components().iter().fold(ExactProb::one(), |acc, c| {
        let key = (c.degree(), c.multiplicity());
        let factor = memo
            .entry(key)
            .or_insert_with(|| component_success(spec.q(), key.0, key.1, b));
        acc.product(factor)
    })
}

/// `(1 - 1/q^{db})^2`, independent of the exponent `e`.
pub fn pmp_single_block(q: u64, d: usize, _e: u32, b: usize) -> ExactProb {
    let qdb = Pow::pow(&BigUint::from(q), (d * b) as u32);
    let base = BigRational::new((&qdb - 1u32).into(), qdb.into());
    ExactProb::new(&base * &base)
}

/// The extremal elementary-divisor profile for `n x n` matrices over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCaseProfile {
    pub q: u64,
    pub n: u64,
    /// Cutoff degree `m`: `sum_{d<m} d L_q(d) <= n < sum_{d<=m} d L_q(d)`.
    pub m: u32,
    /// `counts[d-1] = c_d`: `L_q(d)` for `d < m`, `min(L_q(m), floor(r/m))` at `d = m`.
    pub counts: Vec<u64>,
    /// `r = n - sum_{d<m} d L_q(d)`.
    pub residual: u64,
    /// Degree left after the degree-`m` irreducibles, absorbed by raising
    /// exponents: `r - m c_m`.
    pub leftover: u64,
}

impl WorstCaseProfile {
    /// Largest degree actually used (`m` or `m - 1` when `c_m = 0`).
    pub fn effective_degree(&self) -> u32 {
        self.counts
            .iter()
            .rposition(|&c| c > 0)
            .map_or(0, |i| i as u32 + 1)
    }

    /// Number of distinct irreducibles in the extremal matrix.
    pub fn irreducible_count(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn worst_profile(q: u64, n: u64) -> WorstCaseProfile {
    assert!(q >= 2 && n >= 1, "need q >= 2 and n >= 1");
    let mut counts = Vec::new();
    let mut used = 0u64;
    let mut m = 1u32;
    loop {
        let l = count_irreducibles_u64(q, m);
        let span = l.saturating_mul(m as u64);
        if used.saturating_add(span) > n {
            let residual = n - used;
            let cm = l.min(residual / m as u64);
            counts.push(cm);
            return WorstCaseProfile {
                q,
                n,
                m,
                counts,
                residual,
                leftover: residual - cm * m as u64,
            };
        }
        counts.push(l);
        used += span;
        m += 1;
    }
}

fn power_factor(q: u64, d: usize, b: usize, exponent: u64) -> BigRational {
    let qdb = Pow::pow(&BigUint::from(q), (d * b) as u32);
    let exponent = u32::try_from(exponent).expect("exponent fits u32 under the exact limit");
    let num = Pow::pow(&(&qdb - 1u32), exponent);
    let den = Pow::pow(&qdb, exponent);
    BigRational::new(num.into(), den.into())
}

/// Worst-case success probability
/// `prod_{d=1}^m (1 - 1/q^{db})^{2 c_d}` over all `n x n` matrices.
pub fn pmpmin_exact(q: u64, n: u64, b: usize, limit: u64) -> Result<ExactProb, ProbError> {
    if n > limit {
        return Err(ProbError::ExactLimitExceeded { n, limit });
    }
    check_params(q, n, b)?;
    let profile = worst_profile(q, n);
    let value = profile
        .counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(BigRational::one(), |acc, (i, &c)| {
            acc * power_factor(q, i + 1, b, 2 * c)
        });
    Ok(ExactProb::new(value))
}

/// The literal alternative reading with one shared exponent `2 L_q(n, m)` on
/// every factor `d = 1..m`. Exposed for comparison only; it is not a lower
/// bound in general.
pub fn pmpmin_exact_shared_exponent(
    q: u64,
    n: u64,
    b: usize,
    limit: u64,
) -> Result<ExactProb, ProbError> {
    if n > limit {
        return Err(ProbError::ExactLimitExceeded { n, limit });
    }
    check_params(q, n, b)?;
    let profile = worst_profile(q, n);
    let cm = *profile.counts.last().expect("at least one degree");
    let value = (1..=profile.m as usize).fold(BigRational::one(), |acc, d| {
        acc * power_factor(q, d, b, 2 * cm)
    });
    Ok(ExactProb::new(value))
}

fn check_params(q: u64, n: u64, b: usize) -> Result<(), ProbError> {
    if q < 2 {
        return Err(ProbError::InvalidParameter(format!(
            "q = {q} must be at least 2"
        )));
    }
    if n < 1 {
        return Err(ProbError::InvalidParameter("n must be at least 1".into()));
    }
    if b < 1 {
        return Err(ProbError::InvalidParameter("b must be at least 1".into()));
    }
    Ok(())
}

/// Worst-case probability evaluated in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogProb {
    /// `ln pmpmin`
    pub ln_success: f64,
    pub success: f64,
    /// `1 - pmpmin`, accurate to ~14 significant digits via `expm1`.
    pub failure: f64,
    /// `log10(1 - pmpmin)`, finite even when `failure` underflows.
    pub log10_failure: f64,
}

/// `pmpmin` via `sum_d 2 c_d ln(1 - q^{-db})`, usable up to `n ~ 10^18`.
///
/// Each term is one `ln_1p` of an exactly representable power, good to about
/// one ulp; the sum has at most `m` same-sign terms, and `expm1` keeps the
/// failure probability's relative error at the same level.
pub fn pmpmin_log(q: u64, n: u64, b: usize) -> Result<LogProb, ProbError> {
    check_params(q, n, b)?;
    let profile = worst_profile(q, n);
    let ln_q = (q as f64).ln();
    let mut ln_success = 0.0f64;
    // log-sum-exp accumulator of ln(2 c_d q^{-db}) for the underflow path
    let mut ln_terms = Vec::new();
    for (i, &c) in profile.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let ln_x = -((i + 1) as f64) * b as f64 * ln_q;
        let x = ln_x.exp();
        ln_success += 2.0 * c as f64 * (-x).ln_1p();
        ln_terms.push((2.0 * c as f64).ln() + ln_x);
    }
    let failure = -ln_success.exp_m1();
    let log10_failure = if failure > 1e-290 {
        failure.log10()
    } else {
        let top = ln_terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = ln_terms.iter().map(|t| (t - top).exp()).sum();
        (top + sum.ln()) / std::f64::consts::LN_10
    };
    Ok(LogProb {
        ln_success,
        success: ln_success.exp(),
        failure,
        log10_failure,
    })
}

/// Closed-form approximations to `pmpmin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approximations {
    /// `exp(-2 H_m / q^b)`, `H_m` the `m`-th harmonic number.
    pub harmonic: f64,
    /// For `q >= n`: exact `(1 - 1/q^b)^{2n}` and its `exp(-2n/q^b)` estimate.
    pub large_field: Option<(f64, f64)>,
    /// For `n > q >= sqrt(n)`: `(1 - 1/q^b)^{2q} (1 - 1/q^{2b})^{n-q}` and
    /// `exp(-(2/q^{b-1} + (n-q)/q^{2b}))`.
    pub medium_field: Option<(f64, f64)>,
}

pub fn harmonic(m: u32) -> f64 {
    (1..=m).map(|k| 1.0 / k as f64).sum()
}

pub fn pmpmin_approx(q: u64, n: u64, b: usize) -> Result<Approximations, ProbError> {
    check_params(q, n, b)?;
    let profile = worst_profile(q, n);
    let (qf, nf, bf) = (q as f64, n as f64, b as i32);
    let inv_qb = qf.powi(-bf);
    let harmonic = (-2.0 * harmonic(profile.m) * inv_qb).exp();
    let large_field = (q >= n).then(|| {
        (
            (2.0 * nf * (-inv_qb).ln_1p()).exp(),
            (-2.0 * nf * inv_qb).exp(),
        )
    });
    let medium_field = (n > q && q.saturating_mul(q) >= n).then(|| {
        let inv_q2b = qf.powi(-2 * bf);
        let exact = (2.0 * qf * (-inv_qb).ln_1p() + (nf - qf) * (-inv_q2b).ln_1p()).exp();
        let approx = (-(2.0 * qf.powi(1 - bf) + (nf - qf) * inv_q2b)).exp();
        (exact, approx)
    });
    Ok(Approximations {
        harmonic,
        large_field,
        medium_field,
    })
}

/// Lower bounds on the unblocked (`b = 1`) success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonBounds {
    /// `1 / (6 log_q n)`
    pub wiedemann: f64,
    /// `max(0, 1 - n/q)`
    pub kaltofen_pan: f64,
    /// One-sided worst case `prod_d (1 - q^{-d})^{c_d}`; equals
    /// `(1 - 1/q)^n` when `q >= n`.
    pub ours: f64,
    /// Two-sided worst case `pmpmin` at `b = 1`, for reference.
    pub ours_two_sided: f64,
}

pub fn comparison_bounds(q: u64, n: u64) -> Result<ComparisonBounds, ProbError> {
    if n < 2 {
        return Err(ProbError::InvalidParameter("n must be at least 2".into()));
    }
    check_params(q, n, 1)?;
    let (qf, nf) = (q as f64, n as f64);
    let wiedemann = qf.ln() / (6.0 * nf.ln());
    let kaltofen_pan = (1.0 - nf / qf).max(0.0);
    let log = pmpmin_log(q, n, 1)?;
    Ok(ComparisonBounds {
        wiedemann,
        kaltofen_pan,
        ours: (0.5 * log.ln_success).exp(),
        ours_two_sided: log.success,
    })
}
