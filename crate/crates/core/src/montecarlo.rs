//! Empirical and exhaustive estimation of the projection success
//! probability, and the CSV sweep format shared with the CLI.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactprob::{pmp_exact, pmpmin_log, ExactProb, ProbError};
use crate::field::{seeded_rng, trial_rng, FieldElement, FieldError, Matrix, PrimeField};
use crate::jordan::{
    build, project_sequence, spec_minpoly, BlackBoxMatrix, ElementaryDivisorSpec, SpecError,
};
use crate::poly::{minpoly_block_sequence, Poly};

/// Default bound on `q^{2nb}` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 1 << 26;

/// Stream reserved for resolving degree-only spec entries, disjoint from the
/// per-trial streams `0..trials`.
const BUILD_STREAM: u64 = u64::MAX;

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error("enumeration of q^(2nb) = {pairs} projection pairs exceeds the limit {limit}")]
    LimitExceeded { pairs: u128, limit: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("writing CSV: {0}")]
    Io(#[from] io::Error),
}

/// Outcome of a Monte-Carlo run.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub exact: Option<ExactProb>,
    /// `(estimate - exact) / sqrt(exact (1 - exact) / trials)`; 0 when no
    /// exact value is known.
    pub z_score: f64,
    /// Wilson score interval at 95%.
    pub ci95: (f64, f64),
    pub seed: u64,
    pub elapsed: Duration,
}

/// Sequence length used to recover a minimal polynomial of degree at most
/// `n`.
pub fn recovery_length(n: usize) -> usize {
    2 * n + 2
}

/// Whether the projection `U A^k V` has the same minimal polynomial as `A`.
pub fn projection_preserves(
    a: &BlackBoxMatrix,
    target: &Poly,
    u: &Matrix,
    v: &Matrix,
) -> Result<bool, SpecError> {
    let seq = project_sequence(a, u, v, recovery_length(a.dimension()))?;
    Ok(&minpoly_block_sequence(&seq) == target)
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn z_score(successes: u64, trials: u64, exact: f64) -> f64 {
    let n = trials as f64;
    let estimate = successes as f64 / n;
    let var = exact * (1.0 - exact) / n;
    if var == 0.0 {
        return if estimate == exact {
            0.0
        } else {
            f64::INFINITY
        };
    }
    (estimate - exact) / var.sqrt()
}

/// Runs `trials` independent projections of the matrix built from `spec`.
///
/// Trial `i` draws `U` then `V` from [`trial_rng`]`(seed, i)`, so the report
/// depends only on `(spec, b, trials, seed)` and not on `threads`.
/// `threads = None` uses the global rayon pool.
pub fn estimate_pmp(
    spec: &ElementaryDivisorSpec,
    b: usize,
    trials: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<TrialReport, MonteCarloError> {
    if trials == 0 {
        return Err(MonteCarloError::InvalidParameter(
            "trials must be at least 1".into(),
        ));
    }
    if b == 0 {
        return Err(MonteCarloError::InvalidParameter(
            "b must be at least 1".into(),
        ));
    }
    let start = Instant::now();
    let (resolved, a) = build(spec, &mut trial_rng(seed, BUILD_STREAM))?;
    let target = spec_minpoly(&resolved)?;
    let field = a.field();
    let n = a.dimension();

    let run = || -> Result<u64, MonteCarloError> {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, t);
                let u = field.random_matrix(&mut rng, b, n)?;
                let v = field.random_matrix(&mut rng, n, b)?;
                Ok(u64::from(projection_preserves(&a, &target, &u, &v)?))
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))
    };
    let successes = match threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| MonteCarloError::ThreadPool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };

    let exact = pmp_exact(&resolved, b);
    let z = z_score(successes, trials, exact.to_f64());
    Ok(TrialReport {
        trials,
        successes,
        estimate: successes as f64 / trials as f64,
        exact: Some(exact),
        z_score: z,
        ci95: wilson_interval(successes, trials, 1.959_963_984_540_054),
        seed,
        elapsed: start.elapsed(),
    })
}

fn pair_count(q: u64, n: usize, b: usize) -> u128 {
    (q as u128)
        .checked_pow((2 * n * b) as u32)
        .unwrap_or(u128::MAX)
}

fn check_exhaustive(
    spec: &ElementaryDivisorSpec,
    b: usize,
    limit: u128,
) -> Result<(), MonteCarloError> {
    if b == 0 {
        return Err(MonteCarloError::InvalidParameter(
            "b must be at least 1".into(),
        ));
    }
    let pairs = pair_count(spec.q(), spec.dimension(), b);
    if pairs > limit {
        return Err(MonteCarloError::LimitExceeded { pairs, limit });
    }
    Ok(())
}

/// Visits every matrix of the given shape in lexicographic order of its
/// row-major entries.
fn for_each_matrix(field: PrimeField, rows: usize, cols: usize, mut visit: impl FnMut(&Matrix)) {
    let p = field.modulus();
    let mut m = Matrix::zeros(field, rows, cols);
    let len = rows * cols;
    loop {
        visit(&m);
        // odometer, last entry fastest
        let mut idx = len;
        loop {
            if idx == 0 {
                return;
            }
            idx -= 1;
            let (r, c) = (idx / cols, idx % cols);
            let next = m.get(r, c).value() + 1;
            if next < p {
                m.set(r, c, field.elem(next as i64));
                break;
            }
            m.set(r, c, FieldElement::ZERO);
        }
    }
}

/// Exact success fraction over all `q^{2nb}` pairs `(U, V)`.
///
/// `V` is enumerated explicitly. For each `V`, the success test
/// "`minpoly(U A^k V) = minpoly(A)`" is the conjunction over the distinct
/// irreducible factors `f` of `m = minpoly(A)` of "`(m/f)(U A^k V) != 0`";
/// that sequence is `U` times the fixed `n x bD` block
/// `[(m/f)(A) A^k V]_{k<D}` (`D = deg m`), so a row of `U` either hits it or
/// not. Counting `b`-tuples of rows whose hit-sets cover every factor counts
/// exactly the successful `U`. No probability formula is involved.
pub fn exhaustive_pmp(
    spec: &ElementaryDivisorSpec,
    b: usize,
    limit: u128,
) -> Result<ExactProb, MonteCarloError> {
    check_exhaustive(spec, b, limit)?;
    let (resolved, a) = build(spec, &mut seeded_rng(0))?;
    let field = a.field();
    let n = a.dimension();
    let m = spec_minpoly(&resolved)?;
    let deg = m.degree().expect("minpoly is nonzero");
    let divisors: Vec<Poly> = resolved
        .components()
        .iter()
        .map(|c| m.div_rem(c.poly().expect("resolved")).map(|(q, _)| q))
        .collect::<Result<_, _>>()
        .map_err(SpecError::from)?;
    let factors = divisors.len();
    assert!(factors <= 16, "hit-set masks are u16");
    let full: usize = (1 << factors) - 1;

    // all row vectors u in F^n
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for_each_matrix(field, 1, n, |u| rows.push(u.row(0).to_vec()));

    let mut successes = BigUint::zero();
    let mut hist = vec![0u64; full + 1];
    let mut krylov: Vec<Vec<Vec<FieldElement>>> = Vec::with_capacity(2 * deg);
    let mut blocks: Vec<Vec<Vec<FieldElement>>> = vec![Vec::new(); factors];
    let mut scratch = vec![FieldElement::ZERO; n];

    for_each_matrix(field, n, b, |v| {
        // krylov[k][j] = A^k v_j, k < 2D
        krylov.clear();
        let mut cols: Vec<Vec<FieldElement>> = (0..b).map(|j| v.column(j)).collect();
        for _ in 0..2 * deg {
            krylov.push(cols.clone());
            for col in &mut cols {
                a.apply_into(col, &mut scratch);
                std::mem::swap(col, &mut scratch);
            }
        }
        // blocks[i] = columns (m/f_i)(A) A^k v_j for k < D, j < b
        for (g, block) in divisors.iter().zip(&mut blocks) {
            block.clear();
            for k in 0..deg {
                #[allow(clippy::needless_range_loop)]
                for j in 0..b {
                    let mut col = vec![FieldElement::ZERO; n];
                    for (i, &c) in g.coeffs().iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (x, &y) in col.iter_mut().zip(&krylov[i + k][j]) {
                            *x = field.mul_add(*x, c, y);
                        }
                    }
                    if col.iter().any(|x| !x.is_zero()) {
                        block.push(col);
                    }
                }
            }
        }
        hist.iter_mut().for_each(|h| *h = 0);
        for u in &rows {
            let mut mask = 0usize;
            for (i, block) in blocks.iter().enumerate() {
                let hit = block.iter().any(|col| {
                    u.iter()
                        .zip(col)
                        .fold(FieldElement::ZERO, |acc, (&x, &y)| field.mul_add(acc, x, y))
                        != FieldElement::ZERO
                });
                if hit {
                    mask |= 1 << i;
                }
            }
            hist[mask] += 1;
        }
        // number of b-tuples of rows whose masks cover `full`
        let mut dp = vec![0u128; full + 1];
        dp[0] = 1;
        for _ in 0..b {
            let mut next = vec![0u128; full + 1];
            for (acc, &ways) in dp.iter().enumerate().filter(|(_, &w)| w > 0) {
                for (mask, &count) in hist.iter().enumerate().filter(|(_, &c)| c > 0) {
                    next[acc | mask] += ways * count as u128;
                }
            }
            dp = next;
        }
        successes += BigUint::from(dp[full]);
    });

    let total = Pow::pow(&BigUint::from(spec.q()), (2 * n * b) as u32);
    Ok(ExactProb::new(BigRational::new(
        successes.into(),
        total.into(),
    )))
}

/// Same quantity as [`exhaustive_pmp`], computed the literal way: every
/// `(U, V)` pair, Berlekamp–Massey on each projected sequence. Only practical
/// for a few million pairs.
pub fn exhaustive_pmp_direct(
    spec: &ElementaryDivisorSpec,
    b: usize,
    limit: u128,
) -> Result<ExactProb, MonteCarloError> {
    check_exhaustive(spec, b, limit)?;
    let (resolved, a) = build(spec, &mut seeded_rng(0))?;
    let target = spec_minpoly(&resolved)?;
    let field = a.field();
    let n = a.dimension();
    let mut us = Vec::new();
    for_each_matrix(field, b, n, |u| us.push(u.clone()));
    let mut successes = 0u64;
    let mut failure: Option<SpecError> = None;
    for_each_matrix(field, n, b, |v| {
        for u in &us {
            match projection_preserves(&a, &target, u, v) {
                Ok(true) => successes += 1,
                Ok(false) => {}
                Err(e) => failure = Some(e),
            }
        }
    });
    if let Some(e) = failure {
        return Err(e.into());
    }
    let total = Pow::pow(&BigUint::from(spec.q()), (2 * n * b) as u32);
    Ok(ExactProb::new(BigRational::new(
        successes.into(),
        total.into(),
    )))
}

/// One sweep case: a concrete spec, or the worst case over all `n x n`
/// matrices.
#[derive(Debug, Clone)]
pub enum SweepCase {
    Spec {
        name: String,
        spec: ElementaryDivisorSpec,
    },
    Worst {
        name: String,
        q: u64,
        n: u64,
    },
}

impl SweepCase {
    pub fn name(&self) -> &str {
        match self {
            SweepCase::Spec { name, .. } | SweepCase::Worst { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub blocks: Vec<usize>,
    /// 0 computes exact values only.
    pub trials: u64,
    pub seed: u64,
    /// Decimal places of the exact column for spec cases.
    pub digits: usize,
    pub threads: Option<usize>,
}

/// One CSV row. For spec cases `exact` is the success probability; for
/// worst-case rows it is the failure probability `1 - pmpmin`, computed in
/// log space.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub case: String,
    pub q: u64,
    pub n: u64,
    pub b: usize,
    pub exact: String,
    pub estimate: Option<f64>,
    pub trials: u64,
    pub successes: u64,
    pub z: Option<f64>,
    pub ci: Option<(f64, f64)>,
    pub seed: Option<u64>,
}

pub const CSV_HEADER: &str = "case,q,n,b,exact,estimate,trials,successes,z,ci_lo,ci_hi,seed";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.case,
            self.q,
            self.n,
            self.b,
            self.exact,
            opt(self.estimate),
            self.trials,
            self.successes,
            opt(self.z),
            opt(self.ci.map(|c| c.0)),
            opt(self.ci.map(|c| c.1)),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        )
    }
}

/// Row `i` of a simulated sweep uses seed `config.seed + i`.
pub fn sweep(cases: &[SweepCase], config: &SweepConfig) -> Result<Vec<SweepRow>, MonteCarloError> {
    let mut rows = Vec::with_capacity(cases.len() * config.blocks.len());
    for case in cases {
        for &b in &config.blocks {
            let row_seed = config.seed.wrapping_add(rows.len() as u64);
            let row = match case {
                SweepCase::Spec { name, spec } => {
                    let exact = pmp_exact(spec, b);
                    let mut row = SweepRow {
                        case: name.clone(),
                        q: spec.q(),
                        n: spec.dimension() as u64,
                        b,
                        exact: exact.to_decimal(config.digits),
                        estimate: None,
                        trials: 0,
                        successes: 0,
                        z: None,
                        ci: None,
                        seed: None,
                    };
                    if config.trials > 0 {
                        let report =
                            estimate_pmp(spec, b, config.trials, row_seed, config.threads)?;
                        row.estimate = Some(report.estimate);
                        row.trials = report.trials;
                        row.successes = report.successes;
                        row.z = Some(report.z_score);
                        row.ci = Some(report.ci95);
                        row.seed = Some(row_seed);
                    }
                    row
                }
                SweepCase::Worst { name, q, n } => {
                    let log = pmpmin_log(*q, *n, b)?;
                    let exact = if log.failure > 0.0 {
                        format!("{:.12e}", log.failure)
                    } else {
                        format!("1e{:.6}", log.log10_failure)
                    };
                    SweepRow {
                        case: name.clone(),
                        q: *q,
                        n: *n,
                        b,
                        exact,
                        estimate: None,
                        trials: 0,
                        successes: 0,
                        z: None,
                        ci: None,
                        seed: None,
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv())?;
    }
    Ok(())
}

/// Fraction helper for tests and reports.
pub fn exact_fraction(num: u64, den: u64) -> ExactProb {
    ExactProb::new(BigRational::new(num.into(), den.into()))
}

/// `successes / trials` as an exact rational, for comparing a run against a
/// reference fraction without rounding.
pub fn empirical_fraction(report: &TrialReport) -> BigRational {
    if report.trials == 0 {
        return BigRational::zero();
    }
    BigRational::new(report.successes.into(), report.trials.into())
}

/// `true` if the estimate lies within `sigmas` standard errors of the exact
/// value.
pub fn within_sigmas(report: &TrialReport, sigmas: f64) -> bool {
    report.z_score.abs() <= sigmas
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactprob::pmp_single_block;

    fn spec(json: &str) -> ElementaryDivisorSpec {
        ElementaryDivisorSpec::from_json(json).unwrap()
    }

    #[test]
    fn exhaustive_small_cases() {
        let quad = spec(r#"{"q": 2, "blocks": [{"poly": "1,1,1", "exps": [1]}]}"#);
        assert_eq!(
            exhaustive_pmp(&quad, 1, DEFAULT_EXHAUSTIVE_LIMIT).unwrap(),
            exact_fraction(9, 16)
        );
        assert_eq!(
            exhaustive_pmp(&quad, 1, DEFAULT_EXHAUSTIVE_LIMIT).unwrap(),
            pmp_single_block(2, 2, 1, 1)
        );
        let zero = spec(r#"{"q": 2, "blocks": [{"poly": "0,1", "exps": [1]}]}"#);
        assert_eq!(
            exhaustive_pmp(&zero, 1, DEFAULT_EXHAUSTIVE_LIMIT).unwrap(),
            exact_fraction(1, 4)
        );
        let two = spec(
            r#"{"q": 3, "blocks": [{"poly": "1,1", "exps": [1]}, {"poly": "2,1", "exps": [1]}]}"#,
        );
        assert_eq!(
            exhaustive_pmp(&two, 1, DEFAULT_EXHAUSTIVE_LIMIT).unwrap(),
            exact_fraction(16, 81)
        );
    }

    #[test]
    fn counting_oracle_matches_direct_enumeration() {
        let cases = [
            r#"{"q": 2, "blocks": [{"poly": "1,1,1", "exps": [1]}]}"#,
            r#"{"q": 2, "blocks": [{"poly": "0,1", "exps": [2, 1]}]}"#,
            r#"{"q": 2, "blocks": [{"poly": "0,1", "exps": [1, 1]}, {"poly": "1,1", "exps": [1]}]}"#,
            r#"{"q": 3, "blocks": [{"poly": "1,1", "exps": [1, 1]}]}"#,
            r#"{"q": 2, "blocks": [{"poly": "1,1,0,1", "exps": [1]}]}"#,
        ];
        for json in cases {
            let s = spec(json);
            for b in 1..=2 {
                if pair_count(s.q(), s.dimension(), b) > 1 << 16 {
                    continue;
                }
                let fast = exhaustive_pmp(&s, b, DEFAULT_EXHAUSTIVE_LIMIT).unwrap();
                let direct = exhaustive_pmp_direct(&s, b, DEFAULT_EXHAUSTIVE_LIMIT).unwrap();
                assert_eq!(fast, direct, "{json} b={b}");
            }
        }
    }

    #[test]
    fn exhaustive_limit() {
        let s = spec(r#"{"q": 7, "blocks": [{"degree": 1, "exps": [1, 1, 1]}]}"#);
        assert!(matches!(
            exhaustive_pmp(&s, 2, DEFAULT_EXHAUSTIVE_LIMIT),
            Err(MonteCarloError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn reports_are_seed_deterministic_and_thread_independent() {
        let s = spec(
            r#"{"q": 3, "blocks": [{"degree": 2, "exps": [2]}, {"degree": 1, "exps": [1, 1]}]}"#,
        );
        let a = estimate_pmp(&s, 1, 2_000, 42, Some(1)).unwrap();
        let b = estimate_pmp(&s, 1, 2_000, 42, Some(4)).unwrap();
        assert_eq!((a.successes, a.trials), (b.successes, b.trials));
        assert_eq!(a.exact, b.exact);
        let c = estimate_pmp(&s, 1, 2_000, 43, None).unwrap();
        assert_ne!(a.successes, c.successes);
    }

    #[test]
    fn square_blocks_are_not_always_successful() {
        // b = n: random square U, V can be singular, so success < 1
        let s = spec(
            r#"{"q": 2, "blocks": [{"poly": "0,1", "exps": [1]}, {"poly": "1,1", "exps": [1]}]}"#,
        );
        let exact = pmp_exact(&s, 2);
        assert!(exact < ExactProb::one());
        let report = estimate_pmp(&s, 2, 20_000, 7, None).unwrap();
        assert!(report.z_score.abs() < 4.0, "{report:?}");
        assert_eq!(
            exhaustive_pmp(&s, 2, DEFAULT_EXHAUSTIVE_LIMIT).unwrap(),
            exact
        );
    }

    #[test]
    fn shared_values_are_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<BlackBoxMatrix>();
        check::<ExactProb>();
        check::<ElementaryDivisorSpec>();
    }

    #[test]
    fn interval_and_z_helpers() {
        let (lo, hi) = wilson_interval(0, 100, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!(lo < 0.5 && hi > 0.5);
        assert_eq!(z_score(10, 10, 1.0), 0.0);
        assert!(z_score(9, 10, 1.0).is_infinite());
    }

    #[test]
    fn exponent_change_keeps_estimates_compatible() {
        let low = spec(r#"{"q": 3, "blocks": [{"poly": "1,1", "exps": [1, 1]}]}"#);
        let high = spec(r#"{"q": 3, "blocks": [{"poly": "1,1", "exps": [3, 3]}]}"#);
        assert_eq!(pmp_exact(&low, 1), pmp_exact(&high, 1));
        let r1 = estimate_pmp(&low, 1, 20_000, 1, None).unwrap();
        let r2 = estimate_pmp(&high, 1, 20_000, 2, None).unwrap();
        let pooled = r1.exact.as_ref().unwrap().to_f64();
        let se = (2.0 * pooled * (1.0 - pooled) / 20_000.0).sqrt();
        assert!(((r1.estimate - r2.estimate) / se).abs() < 3.0);
        assert!(r1.z_score.abs() < 4.0 && r2.z_score.abs() < 4.0);
    }

    #[test]
    fn sweep_rows_and_csv() {
        let s = spec(
            r#"{"q": 7, "blocks": [{"poly": "6,3,1", "exps": [1]}, {"poly": "4,1", "exps": [1,1,1]}]}"#,
        );
        let cases = vec![
            SweepCase::Spec {
                name: "A1".into(),
                spec: s,
            },
            SweepCase::Worst {
                name: "worst".into(),
                q: 2,
                n: 100_000_000,
            },
        ];
        let config = SweepConfig {
            blocks: vec![1, 2],
            trials: 0,
            seed: 0,
            digits: 3,
            threads: None,
        };
        let rows = sweep(&cases, &config).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].exact, "0.820");
        assert_eq!(rows[1].exact, "0.998");
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 5);
        let mut empty = Vec::new();
        write_csv(&sweep(&[], &config).unwrap(), &mut empty).unwrap();
        assert_eq!(String::from_utf8(empty).unwrap().trim(), CSV_HEADER);
    }
}
