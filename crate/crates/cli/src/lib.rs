//! Command implementations behind the `exlat` binary: polynomial lattice
//! bases, class membership checks, the random-polynomial statistics harness,
//! the fractal-circulant laboratory and the numeric relation oracle. All
//! commands emit JSON on stdout; exit codes are 0 (success), 1 (input
//! error), 2 (internal error), 3 (definitive F verdict), 4 (timeout).

pub mod parse;
pub mod stats;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use exlat::error::Error;
use exlat::fastbasis::{check_e_with, fast_basis_with, FastBasisConfig, Outcome, Timings};
use exlat::lattice::LatticeBasis;
use exlat::oracle::{brute_force_relations, oracle_roots};
use exlat::roots::RootEnclosure;
use exlat::{FractalCirculant, IntPoly, RatScalar};

pub use stats::{run_stats, SampleSpec, StatsReport};

/// Failure modes mapped to process exit codes.
#[derive(Debug)]
pub enum CmdError {
    /// Exit 1.
    Input(String),
    /// Exit 2.
    Internal(String),
    /// Exit 4.
    Timeout,
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 1,
            CmdError::Internal(_) => 2,
            CmdError::Timeout => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CmdError::Input(m) => m.clone(),
            CmdError::Internal(m) => m.clone(),
            CmdError::Timeout => "deadline exceeded".into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(m) => CmdError::Input(m),
            Error::DegreeCap { degree, cap } => {
                CmdError::Input(format!("degree {} exceeds the cap {}", degree, cap))
            }
            Error::Timeout => CmdError::Timeout,
            other => CmdError::Internal(other.to_string()),
        }
    }
}

pub type CmdResult = Result<(String, i32), CmdError>;

/// Options shared by the polynomial-input commands.
#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub power: u32,
    pub max_degree: usize,
    pub verify_digits: u32,
    pub timeout: Option<Duration>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { power: 1, max_degree: 30, verify_digits: 100, timeout: None }
    }
}

impl PipelineOptions {
    fn config(&self) -> FastBasisConfig {
        FastBasisConfig {
            max_degree: self.max_degree,
            verify_digits: self.verify_digits,
            deadline: self.timeout.map(|t| Instant::now() + t),
            ..Default::default()
        }
    }
}

fn prepare_input(poly_text: &str, power: u32) -> Result<IntPoly, CmdError> {
    let f = parse::parse_poly(poly_text).map_err(CmdError::Input)?;
    if power == 0 {
        return Err(CmdError::Input("--power must be >= 1".into()));
    }
    Ok(f.pow(power))
}

#[derive(Serialize)]
pub struct RootJson {
    pub re: String,
    pub im: String,
    pub radius: String,
}

#[derive(Serialize)]
pub struct TimingsJson {
    pub factor_s: f64,
    pub roots_s: f64,
    pub branch_s: f64,
    pub lattice_s: f64,
    pub verify_s: f64,
    pub total_s: f64,
}

impl From<&Timings> for TimingsJson {
    fn from(t: &Timings) -> Self {
        TimingsJson {
            factor_s: t.factor.as_secs_f64(),
            roots_s: t.roots.as_secs_f64(),
            branch_s: t.branch.as_secs_f64(),
            lattice_s: t.lattice.as_secs_f64(),
            verify_s: t.verify.as_secs_f64(),
            total_s: t.total.as_secs_f64(),
        }
    }
}

#[derive(Serialize)]
pub struct BasisJson {
    pub status: String,
    pub witness: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<RootJson>>,
    pub timings: TimingsJson,
}

/// Render `mant * 2^-prec` as a decimal string with `digits` fractional
/// digits (round to nearest; `ceil` rounds away from zero for radii).
fn decimal_string(mant: &BigInt, prec: u32, digits: u32, ceil: bool) -> String {
    let neg = mant.is_negative();
    let a = mant.abs() * BigInt::from(10u32).pow(digits);
    let unit = BigInt::from(1) << prec;
    let q = if ceil {
        num_integer::Integer::div_ceil(&a, &unit)
    } else {
        num_integer::Integer::div_floor(&(a + (&unit >> 1)), &unit)
    };
    let s = q.to_string();
    let s = if s.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
    } else {
        s
    };
    let split = s.len() - digits as usize;
    format!("{}{}.{}", if neg { "-" } else { "" }, &s[..split], &s[split..])
}

fn root_json(e: &RootEnclosure) -> RootJson {
    RootJson {
        re: decimal_string(&e.re, e.prec, 20, false),
        im: decimal_string(if e.is_real { &BigInt::ZERO } else { &e.im }, e.prec, 20, false),
        radius: decimal_string(&e.rad, e.prec, 20, true),
    }
}

fn basis_columns_i64(basis: &LatticeBasis) -> Result<Vec<Vec<i64>>, CmdError> {
    use num_traits::ToPrimitive;
    basis
        .columns()
        .iter()
        .map(|c| {
            c.iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| CmdError::Internal("basis entry overflows i64".into()))
                })
                .collect()
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CmdError> {
    serde_json::to_string_pretty(value).map_err(|e| CmdError::Internal(e.to_string()))
}

/// `basis` subcommand: compute a lattice basis or the definitive F verdict.
pub fn cmd_basis(poly_text: &str, opts: &PipelineOptions) -> CmdResult {
    let f = prepare_input(poly_text, opts.power)?;
    let result = fast_basis_with(&f, &opts.config())?;
    let timings = TimingsJson::from(&result.timings);
    match result.outcome {
        Outcome::Basis { basis, roots, branch, witness } => {
            let json = BasisJson {
                status: "basis".into(),
                witness: witness.as_str().into(),
                branch: Some(branch.as_str().into()),
                rank: Some(basis.rank()),
                basis: Some(basis_columns_i64(&basis)?),
                roots: Some(roots.iter().map(root_json).collect()),
                timings,
            };
            Ok((to_json(&json)?, 0))
        }
        Outcome::NotInClass { witness } => {
            let json = BasisJson {
                status: "F".into(),
                witness: witness.as_str().into(),
                branch: None,
                rank: None,
                basis: None,
                roots: None,
                timings,
            };
            Ok((to_json(&json)?, 3))
        }
    }
}

#[derive(Serialize)]
pub struct CheckEJson {
    pub in_class: bool,
    pub witness: String,
}

/// `check-e` subcommand: class membership with a witness.
pub fn cmd_check_e(poly_text: &str, opts: &PipelineOptions) -> CmdResult {
    let f = prepare_input(poly_text, opts.power)?;
    let (in_class, witness) = check_e_with(&f, &opts.config())?;
    let json = CheckEJson { in_class, witness: witness.as_str().into() };
    Ok((to_json(&json)?, if in_class { 0 } else { 3 }))
}

/// `stats` subcommand: sampled success ratios and runtimes.
pub fn cmd_stats(spec: &SampleSpec, opts: &PipelineOptions) -> CmdResult {
    let report = run_stats(spec, &opts.config())?;
    Ok((to_json(&report)?, 0))
}

#[derive(Serialize)]
pub struct CirculantJson {
    pub order: u32,
    pub depth: u32,
    pub side: usize,
    pub corank_exact: usize,
    pub corank_dft: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corank_slicing: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slicing_number: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slicing_vectors: Option<Vec<Vec<u32>>>,
    pub total_sum_zero: bool,
}

/// `circulant` subcommand: three corank computations and the slicing set.
pub fn cmd_circulant(order: u32, depth: u32, generators_text: &str) -> CmdResult {
    let gens = generators_text
        .replace('\u{2212}', "-")
        .split(',')
        .map(|t| {
            let t = t.trim();
            if let Some((n, d)) = t.split_once('/') {
                let n: BigInt = n.trim().parse().map_err(|_| CmdError::Input(format!("bad generator '{}'", t)))?;
                let d: BigInt = d.trim().parse().map_err(|_| CmdError::Input(format!("bad generator '{}'", t)))?;
                Ok(RatScalar::new(n, d))
            } else {
                t.parse::<BigInt>()
                    .map(RatScalar::from_integer)
                    .map_err(|_| CmdError::Input(format!("bad generator '{}'", t)))
            }
        })
        .collect::<Result<Vec<_>, CmdError>>()?;
    let fc = FractalCirculant::new(order, depth, gens)?;
    let prime = exlat::arith::is_prime_u64(order as u64);
    let json = CirculantJson {
        order,
        depth,
        side: fc.side(),
        corank_exact: fc.corank_exact(),
        corank_dft: fc.corank_dft(),
        corank_slicing: if prime { Some(fc.corank_via_slicing()?) } else { None },
        slicing_number: if prime { Some(fc.slicing_number()?) } else { None },
        slicing_vectors: if prime { Some(fc.slicing_vectors()?) } else { None },
        total_sum_zero: num_traits::Zero::is_zero(&fc.total_sum()),
    };
    Ok((to_json(&json)?, 0))
}

#[derive(Serialize)]
pub struct OracleJson {
    pub rank: usize,
    pub basis: Vec<Vec<i64>>,
    pub bound: i64,
    pub digits: u32,
    pub grade: String,
    pub roots: Vec<RootJson>,
}

/// `oracle` subcommand: bounded brute-force relation search.
pub fn cmd_oracle(poly_text: &str, bound: i64, digits: u32, power: u32) -> CmdResult {
    let f = prepare_input(poly_text, power)?;
    if f.deg() > 8 {
        return Err(CmdError::Input(format!(
            "oracle degree cap is 8 for the CLI (got {})",
            f.deg()
        )));
    }
    let basis = brute_force_relations(&f, bound, digits)?;
    let or = oracle_roots(&f)?;
    let full_roots: Vec<RootJson> = or
        .layout
        .iter()
        .map(|&i| root_json(&or.distinct[i]))
        .collect();
    let json = OracleJson {
        rank: basis.rank(),
        basis: basis_columns_i64(&basis)?,
        bound,
        digits,
        grade: "holds-at-precision evidence, not symbolic proof".into(),
        roots: full_roots,
    };
    Ok((to_json(&json)?, 0))
}
