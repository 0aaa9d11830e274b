use std::error::Error;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use minpoly_proj::catalog::{decimals, table1_specs, TABLE1};
use minpoly_proj::exactprob::{
    comparison_bounds, count_irreducibles, pmp_exact, pmpmin_approx, pmpmin_exact,
    pmpmin_exact_shared_exponent, pmpmin_log, worst_profile, DEFAULT_EXACT_LIMIT,
};
use minpoly_proj::field::{prime_power, PrimeField, RNG_SCHEME};
use minpoly_proj::montecarlo::{
    estimate_pmp, exhaustive_pmp, exhaustive_pmp_direct, sweep, write_csv, SweepCase, SweepConfig,
    SweepRow, DEFAULT_EXHAUSTIVE_LIMIT,
};
use minpoly_proj::poly::{enumerate_irreducibles, DEFAULT_ENUMERATION_LIMIT};
use minpoly_proj::ElementaryDivisorSpec;

type CliResult = Result<(), Box<dyn Error>>;

/// Probability that a random block projection U A^k V preserves the minimal
/// polynomial of A over a finite field.
#[derive(Parser)]
#[command(name = "minpoly-proj", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact success probability for a matrix given by its elementary divisors.
    Pmp {
        /// Spec JSON file, e.g. {"q":7,"blocks":[{"poly":"6,3,1","exps":[1]}]}
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        b: u32,
        /// Decimal places; 0 prints the exact fraction.
        #[arg(long, default_value_t = 3)]
        digits: usize,
    },
    /// Worst-case success probability over all n x n matrices over F_q.
    Worst {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        q: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        b: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Also print the shared-exponent reading of the worst-case product.
        #[arg(long)]
        both_readings: bool,
        #[arg(long, default_value_t = 3)]
        digits: usize,
        /// Largest n evaluated with exact rationals.
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: u64,
    },
    /// Exact values for the five 5x5 reference matrices over F_7, b = 1..4.
    Table1 {
        /// Also print the exact fractions.
        #[arg(long)]
        fractions: bool,
    },
    /// Worst-case failure probability against block size for several fields.
    Figure1 {
        #[arg(long, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3, 5, 7])]
        qs: Vec<u64>,
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u32).range(1..))]
        bmax: u32,
        /// Write CSV here instead of printing a table.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo estimate with z-score against the exact value.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        b: u32,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Master seed; a random one is generated and printed if omitted.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        threads: Option<u64>,
        /// Write the result to this file as a one-row CSV with header.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact fraction by enumerating every projection pair (U, V).
    Enumerate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        b: u32,
        /// Bound on q^(2nb).
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        limit: u128,
        /// Run Berlekamp-Massey on every pair instead of the counting shortcut.
        #[arg(long)]
        direct: bool,
    },
    /// Number of monic irreducible polynomials of degree m over F_q.
    Irreducibles {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        q: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// List them (q prime only).
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: u64,
    },
    /// Compare lower bounds for b = 1.
    CompareBounds {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        q: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Exact when n is within --exact-limit, log space otherwise.
    Auto,
    Exact,
    Log,
    Approx,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn read_spec(path: &Path) -> Result<ElementaryDivisorSpec, Box<dyn Error>> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(ElementaryDivisorSpec::from_json(&text)?)
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Pmp { spec, b, digits } => {
            let spec = read_spec(&spec)?;
            let p = pmp_exact(&spec, b as usize);
            if digits == 0 {
                println!("{p}");
            } else {
                println!("{}", p.to_decimal(digits));
            }
        }
        Command::Worst {
            q,
            n,
            b,
            mode,
            both_readings,
            digits,
            exact_limit,
        } => worst(q, n, b as usize, mode, both_readings, digits, exact_limit)?,
        Command::Table1 { fractions } => table1(fractions),
        Command::Figure1 { n, qs, bmax, out } => figure1(n, &qs, bmax as usize, out.as_deref())?,
        Command::Simulate {
            spec,
            b,
            trials,
            seed,
            threads,
            out,
        } => {
            let spec = read_spec(&spec)?;
            let seed = seed.unwrap_or_else(|| {
                let s = rand::random();
                eprintln!("seed = {s} (generated)");
                s
            });
            let report =
                estimate_pmp(&spec, b as usize, trials, seed, threads.map(|t| t as usize))?;
            let exact = report
                .exact
                .as_ref()
                .expect("spec runs carry an exact value");
            println!("trials     {}", report.trials);
            println!("successes  {}", report.successes);
            println!("estimate   {:.6}", report.estimate);
            println!("exact      {} = {}", exact.to_decimal(6), exact);
            println!("z          {:+.3}", report.z_score);
            println!("ci95       [{:.6}, {:.6}]", report.ci95.0, report.ci95.1);
            println!("seed       {} ({RNG_SCHEME})", report.seed);
            println!("elapsed    {:.3}s", report.elapsed.as_secs_f64());
            if let Some(path) = out {
                let row = SweepRow {
                    case: path_stem(&path),
                    q: spec.q(),
                    n: spec.dimension() as u64,
                    b: b as usize,
                    exact: exact.to_decimal(12),
                    estimate: Some(report.estimate),
                    trials: report.trials,
                    successes: report.successes,
                    z: Some(report.z_score),
                    ci: Some(report.ci95),
                    seed: Some(report.seed),
                };
                write_csv(&[row], BufWriter::new(File::create(&path)?))?;
            }
        }
        Command::Enumerate {
            spec,
            b,
            limit,
            direct,
        } => {
            let spec = read_spec(&spec)?;
            let start = Instant::now();
            let p = if direct {
                exhaustive_pmp_direct(&spec, b as usize, limit)?
            } else {
                exhaustive_pmp(&spec, b as usize, limit)?
            };
            let formula = pmp_exact(&spec, b as usize);
            println!("enumerated {} = {}", p, p.to_decimal(12));
            println!("formula    {} = {}", formula, formula.to_decimal(12));
            println!("agree      {}", p == formula);
            println!("elapsed    {:.3}s", start.elapsed().as_secs_f64());
        }
        Command::Irreducibles { q, m, list, limit } => {
            if prime_power(q).is_none() {
                return Err(format!("q = {q} is not a prime power").into());
            }
            println!("{}", count_irreducibles(q, m));
            if list {
                let field =
                    PrimeField::new(q).map_err(|e| format!("listing needs a prime q: {e}"))?;
                let stdout = io::stdout();
                let mut out = stdout.lock();
                for f in enumerate_irreducibles(field, m as usize, limit)? {
                    writeln!(out, "{}  [{}]", f, f.to_coeff_string())?;
                }
            }
        }
        Command::CompareBounds { q, n } => {
            let c = comparison_bounds(q, n)?;
            println!("wiedemann       {:.6}", c.wiedemann);
            println!("kaltofen-pan    {:.6}", c.kaltofen_pan);
            println!("ours            {:.6}", c.ours);
            println!("ours-two-sided  {:.6}", c.ours_two_sided);
        }
    }
    Ok(())
}

fn path_stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "simulate".into(), |s| s.to_string_lossy().into_owned())
}

fn worst(
    q: u64,
    n: u64,
    b: usize,
    mode: Mode,
    both_readings: bool,
    digits: usize,
    exact_limit: u64,
) -> CliResult {
    if prime_power(q).is_none() {
        return Err(format!("q = {q} is not a prime power").into());
    }
    let mode = match mode {
        Mode::Auto if n <= exact_limit => Mode::Exact,
        Mode::Auto => Mode::Log,
        m => m,
    };
    match mode {
        Mode::Exact => {
            let p = pmpmin_exact(q, n, b, exact_limit)?;
            if both_readings {
                let shared = pmpmin_exact_shared_exponent(q, n, b, exact_limit)?;
                println!("per-degree       {}", p.to_decimal(digits));
                println!("shared-exponent  {}", shared.to_decimal(digits));
            } else {
                println!("{}", p.to_decimal(digits));
            }
        }
        Mode::Log => {
            let log = pmpmin_log(q, n, b)?;
            println!("success        {:.*}", digits, log.success);
            println!("failure        {:.6e}", log.failure);
            println!("log10 failure  {:.6}", log.log10_failure);
            if both_readings {
                eprintln!("note: the shared-exponent reading is only evaluated in exact mode");
            }
        }
        Mode::Approx => {
            let a = pmpmin_approx(q, n, b)?;
            let p = worst_profile(q, n);
            println!("degree cutoff m  {}", p.m);
            println!("harmonic         {:.*}", digits, a.harmonic);
            if let Some((exact, est)) = a.large_field {
                println!(
                    "large field      {:.*} (estimate {:.*})",
                    digits, exact, digits, est
                );
            }
            if let Some((exact, est)) = a.medium_field {
                println!(
                    "medium field     {:.*} (estimate {:.*})",
                    digits, exact, digits, est
                );
            }
        }
        Mode::Auto => unreachable!("resolved above"),
    }
    Ok(())
}

fn table1(fractions: bool) {
    println!(
        "{:<4} {:>10} {:>10} {:>10} {:>10}",
        "", "b=1", "b=2", "b=3", "b=4"
    );
    for ((name, spec), (_, reference)) in table1_specs().iter().zip(TABLE1.iter()) {
        let cells: Vec<String> = reference
            .iter()
            .enumerate()
            .map(|(i, r)| pmp_exact(spec, i + 1).to_decimal(decimals(r)))
            .collect();
        println!(
            "{:<4} {:>10} {:>10} {:>10} {:>10}",
            name, cells[0], cells[1], cells[2], cells[3]
        );
    }
    if fractions {
        println!();
        for (name, spec) in table1_specs() {
            for b in 1..=4 {
                println!("{name} b={b}  {}", pmp_exact(&spec, b));
            }
        }
    }
}

fn figure1(n: u64, qs: &[u64], bmax: usize, out: Option<&Path>) -> CliResult {
    for &q in qs {
        if prime_power(q).is_none() {
            return Err(format!("q = {q} is not a prime power").into());
        }
    }
    let cases: Vec<SweepCase> = qs
        .iter()
        .map(|&q| SweepCase::Worst {
            name: format!("worst-q{q}"),
            q,
            n,
        })
        .collect();
    let config = SweepConfig {
        blocks: (1..=bmax).collect(),
        trials: 0,
        seed: 0,
        digits: 12,
        threads: None,
    };
    let rows = sweep(&cases, &config)?;
    match out {
        Some(path) => write_csv(&rows, BufWriter::new(File::create(path)?))?,
        None => {
            println!("failure probability 1 - pmpmin, n = {n}");
            print!("{:>4}", "b");
            for q in qs {
                print!(" {:>20}", format!("q={q}"));
            }
            println!();
            for b in 1..=bmax {
                print!("{b:>4}");
                for row in rows.iter().filter(|r| r.b == b) {
                    print!(" {:>20}", row.exact);
                }
                println!();
            }
        }
    }
    Ok(())
}
