use std::time::Duration;

use clap::{Parser, Subcommand};

use exlat_cli::{
    cmd_basis, cmd_check_e, cmd_circulant, cmd_oracle, cmd_stats, CmdError, PipelineOptions,
    SampleSpec,
};

/// Exact multiplicative-relation lattices between polynomial roots.
#[derive(Parser)]
#[command(name = "exlat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a basis of the exponent lattice of the roots of a polynomial,
    /// or report the definitive verdict F when it is outside the tractable
    /// class.
    Basis {
        /// Polynomial: ascending comma-separated coefficients ("1,0,-2") or
        /// an expression ("x^3 - 2"). Rational coefficients are allowed.
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Decide membership in the tractable class, with a witness.
    CheckE {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Sample random polynomials of bounded degree and height, run the
    /// pipeline on each, and report success ratios and runtimes.
    Stats {
        /// Degree bound n (coefficients c_0..c_n are sampled).
        #[arg(short = 'n', long)]
        degree: usize,
        /// Height bound H (coefficients uniform on [-H, H]).
        #[arg(short = 'H', long)]
        height: i64,
        /// Number of samples.
        #[arg(long)]
        count: usize,
        /// Master seed; per-sample streams are derived by counter.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Per-sample timeout in seconds (timed-out samples count as OT).
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Condition on c_n != 0 (sample the exact-degree slice).
        #[arg(long)]
        exact_degree: bool,
        /// Pin coefficient i to value c; repeatable (e.g. --fixed 0=1).
        #[arg(long = "fixed", value_parser = parse_fixed)]
        fixed: Vec<(usize, i64)>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Degree cap for the pipeline.
        #[arg(long, default_value_t = 30)]
        max_degree: usize,
        /// Decimal digits for numeric verification of emitted bases.
        #[arg(long = "precision", default_value_t = 100)]
        verify_digits: u32,
    },
    /// Build a fractal circulant matrix and compute its corank three ways.
    Circulant {
        /// Order m >= 2.
        #[arg(short = 'm', long)]
        order: u32,
        /// Depth d >= 1.
        #[arg(short = 'd', long)]
        depth: u32,
        /// Comma-separated generator table of length m^d, lexicographic
        /// index order; rational entries allowed.
        #[arg(short = 'g', long)]
        generators: String,
    },
    /// Brute-force relation search with bounded exponents (numeric-grade).
    Oracle {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// Exponent bound B (all |v_i| <= B are enumerated).
        #[arg(short = 'b', long, default_value_t = 2)]
        bound: i64,
        /// Verification digits.
        #[arg(long, default_value_t = 100)]
        digits: u32,
        /// Raise the input to this power first.
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
}

#[derive(clap::Args)]
struct CommonOpts {
    /// Raise the input to this power before processing (multiplicity tests).
    #[arg(long, default_value_t = 1)]
    power: u32,
    /// Degree cap for the pipeline.
    #[arg(long, default_value_t = 30)]
    max_degree: usize,
    /// Decimal digits for numeric verification of emitted bases.
    #[arg(long = "precision", default_value_t = 100)]
    verify_digits: u32,
    /// Overall timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

impl CommonOpts {
    fn pipeline(&self) -> PipelineOptions {
        PipelineOptions {
            power: self.power,
            max_degree: self.max_degree,
            verify_digits: self.verify_digits,
            timeout: self.timeout.map(Duration::from_secs_f64),
        }
    }
}

fn parse_fixed(s: &str) -> Result<(usize, i64), String> {
    let (i, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected INDEX=VALUE, got '{}'", s))?;
    let i = i.trim().parse().map_err(|_| format!("bad index '{}'", i))?;
    let v = v.trim().parse().map_err(|_| format!("bad value '{}'", v))?;
    Ok((i, v))
}

fn run(cli: Cli) -> Result<(String, i32), CmdError> {
    match cli.command {
        Command::Basis { poly, opts } => cmd_basis(&poly, &opts.pipeline()),
        Command::CheckE { poly, opts } => cmd_check_e(&poly, &opts.pipeline()),
        Command::Stats {
            degree,
            height,
            count,
            seed,
            timeout,
            exact_degree,
            fixed,
            jobs,
            max_degree,
            verify_digits,
        } => {
            let spec = SampleSpec {
                degree,
                height,
                fixed,
                exact_degree,
                count,
                seed,
                timeout: Duration::from_secs_f64(timeout),
            };
            let pipeline = PipelineOptions {
                power: 1,
                max_degree,
                verify_digits,
                timeout: None,
            };
            match jobs {
                Some(j) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(j)
                        .build()
                        .map_err(|e| CmdError::Internal(e.to_string()))?;
                    pool.install(|| cmd_stats(&spec, &pipeline))
                }
                None => cmd_stats(&spec, &pipeline),
            }
        }
        Command::Circulant { order, depth, generators } => {
            cmd_circulant(order, depth, &generators)
        }
        Command::Oracle { poly, bound, digits, power } => {
            cmd_oracle(&poly, bound, digits, power)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok((json, code)) => {
            println!("{}", json);
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.message() }));
            std::process::exit(e.exit_code());
        }
    }
}
