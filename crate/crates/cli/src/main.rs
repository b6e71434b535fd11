//! Command-line frontend: single-n reports, range scans to CSV/JSON,
//! verification runs, and density experiments.
//!
//! Exit codes: 0 on success, 1 when verification finds failures, 2 on
//! invalid input or usage.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quadrank::arith::Sieve;
use quadrank::biquad::BiquadInvariants;
use quadrank::classgroup::Oracle;
use quadrank::density::{density_report, eta_inf, rk4_quadratic_histogram};
use quadrank::pell::{cf_sqrt, solve_pm2_of};
use quadrank::quadratic::{hypothesis_ordinary, in_n, QuadInvariants};
use quadrank::scan::{scan_to_csv, scan_to_json, ScanOptions};
use quadrank::verify::verify_all;
use quadrank::FactoredOddSquarefree;

#[derive(Parser)]
#[command(name = "quadrank", version, about = "Class-group 2^k-ranks of quadratic and Dirichlet biquadratic fields", long_about = None)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Human-readable report of every invariant of a single n.
    Invariants {
        /// Odd squarefree integer > 1.
        n: u64,
        /// Consult the class-group oracle when the discriminants are within
        /// this bound.
        #[arg(long, default_value_t = 100_000)]
        oracle_max: u64,
    },
    /// Scan all odd squarefree 3 < n <= max into CSV or JSON records.
    Scan {
        #[arg(long)]
        max: u64,
        /// Keep only n with both narrow 4-ranks zero.
        #[arg(long = "only-N")]
        only_n: bool,
        /// Populate oracle-backed fields for n up to this bound.
        #[arg(long)]
        oracle_max: Option<u64>,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the verification suites; exits 1 on any failure.
    Verify {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        oracle_max: u64,
    },
    /// Density and concentration statistics over 3 < n <= max.
    Density {
        #[arg(long)]
        max: u64,
        /// Window half-width for the 4-rank concentration statistic.
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: could not configure {jobs} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Invariants { n, oracle_max } => invariants(n, oracle_max),
        Command::Scan {
            max,
            only_n,
            oracle_max,
            out,
            format,
        } => {
            let sieve = Sieve::new(max)?;
            let opts = ScanOptions { only_n, oracle_max };
            let file = File::create(&out)?;
            let mut w = BufWriter::new(file);
            let count = match format {
                Format::Csv => scan_to_csv(&sieve, max, &opts, &mut w)?,
                Format::Json => scan_to_json(&sieve, max, &opts, &mut w)?,
            };
            w.flush()?;
            println!("wrote {count} records to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { max, oracle_max } => {
            let report = verify_all(max, oracle_max)?;
            print!("{}", report.render());
            if report.passed() {
                println!("all checks passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verification FAILED");
                Ok(ExitCode::from(1))
            }
        }
        Command::Density { max, epsilon } => {
            let sieve = Sieve::new(max)?;
            let report = density_report(&sieve, max, epsilon)?;
            println!("range:                 3 < n <= {}", report.limit);
            println!("odd squarefree:        {}", report.count_odd_squarefree);
            println!(
                "in N:                  {} ({:.5}; limiting constant {:.5})",
                report.count_in_n,
                report.fraction_in_n,
                eta_inf(2.0)
            );
            println!(
                "in E:                  {} ({:.6})",
                report.count_in_e, report.fraction_in_e
            );
            println!(
                "omega3 mean/variance:  {:.4} / {:.4} (half log log = {:.4})",
                report.omega3_mean, report.omega3_variance, report.half_loglog
            );
            println!(
                "omega3 outside window: {:.4} of all n (window [{:.3}, {:.3}])",
                report.omega3_outside_frac, report.omega3_window.0, report.omega3_window.1
            );
            println!(
                "4-rank concentration:  {:.4} of all n are in N with |rk4 - L/2| <= {} L",
                report.corollary_fraction, report.corollary_epsilon
            );
            println!("rk4(Cl(K_n)) histogram over n in N:");
            for (rank, count) in &report.rk4_histogram {
                println!("  rk4 = {rank}: {count}");
            }
            let (plus, minus) = rk4_quadratic_histogram(&sieve, max)?;
            println!("rk4(Cl+(n)) histogram: {plus:?}");
            println!("rk4(Cl(-n)) histogram: {minus:?}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn invariants(n: u64, oracle_max: u64) -> anyhow::Result<ExitCode> {
    let f = FactoredOddSquarefree::new(n)?;
    let q = QuadInvariants::compute(&f);
    let member_n = in_n(&f);

    println!("n = {n} = {}", format_factorization(&f));
    println!(
        "  omega = {}, omega1 = {}, omega3 = {}, has prime 5 mod 8: {}",
        f.omega, f.omega1, f.omega3, f.has_p5mod8
    );
    println!(
        "  discriminants: disc(+n) = {}, disc(-n) = {}",
        q.disc_plus, q.disc_minus
    );
    println!(
        "  rk2: narrow(+) = {}, ordinary(+) = {}, (-) = {}",
        q.rk2_narrow_plus, q.rk2_ordinary_plus, q.rk2_minus
    );
    println!(
        "  rk4 (Redei): narrow(+) = {}, (-) = {}   =>  n in N: {}",
        q.rk4_narrow_plus, q.rk4_minus, member_n
    );
    println!("  narrow-to-ordinary index: {}", q.index_i);

    match cf_sqrt(n) {
        Ok(pell) => {
            println!(
                "  sqrt({n}) continued fraction: period {}, partial quotients {:?}, unit norm {}",
                pell.period, pell.partial_quotients, pell.unit_norm
            );
        }
        Err(e) => println!("  continued fraction unavailable: {e}"),
    }
    if n > 3 {
        match solve_pm2_of(&f)? {
            Some(w) => {
                let (a, b) = w.unit();
                println!(
                    "  in E: yes, c^2 - {n} e^2 = {}2 with c = {}, e = {}",
                    if w.sign > 0 { "+" } else { "-" },
                    w.c,
                    w.e
                );
                println!("  certified unit: a = {a}, b = {b} with a^2 - {n} b^2 = 1");
            }
            None => println!("  in E: no (no c^2 - {n} e^2 = +-2 along one period)"),
        }
    } else {
        println!("  in E: undefined for n <= 3");
    }

    let oracle_ok = n > 3 && 4 * n <= oracle_max;
    let hypothesis = if oracle_ok {
        let oracle = Oracle::new(4 * oracle_max as i64);
        let hyp = hypothesis_ordinary(&f, &oracle)?;
        let hp = oracle.class_number(q.disc_plus)?;
        let hm = oracle.class_number(q.disc_minus)?;
        println!("  oracle: h({n}) = {hp}, h(-{n}) = {hm}, ordinary-4-rank hypothesis: {hyp}");
        let narrow_p = oracle.narrow_class_group(q.disc_plus)?;
        let narrow_m = oracle.narrow_class_group(q.disc_minus)?;
        println!(
            "  oracle groups: Cl+({}) = {:?}, Cl({}) = {:?}",
            q.disc_plus, narrow_p.invariant_factors, q.disc_minus, narrow_m.invariant_factors
        );
        hyp
    } else {
        if n > 3 {
            println!("  oracle: skipped (|disc| beyond --oracle-max {oracle_max})");
        }
        member_n
    };

    if n > 3 {
        let b = BiquadInvariants::compute(&f, hypothesis)?;
        println!(
            "  K_n = Q(sqrt({n}), sqrt(-{n})): rk2 = {}, F(n) = {}, delta = {}, epsilon = {}, Q = {}",
            b.rk2_k, b.f_count, b.delta, b.epsilon, b.q
        );
        match b.rk4_k {
            Some(rk4) => {
                println!(
                    "  rk4(Cl(K_n)) = {rk4} (bounds [{}, {}])",
                    b.bounds.0, b.bounds.1
                );
                if rk4 < 0 {
                    println!("  WARNING: negative formula value — reportable anomaly");
                }
            }
            None => println!(
                "  rk4(Cl(K_n)): formula not applicable (4-rank hypothesis fails); bounds would be [{}, {}]",
                b.bounds.0, b.bounds.1
            ),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn format_factorization(f: &FactoredOddSquarefree) -> String {
    f.primes
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(" * ")
}
