//! Command-line front end for `readonce`.
//!
//! Every command returns its standard output as a string; decisions are
//! JSON data and never affect the exit status.

mod polytext;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use readonce::oracle::{self, RopClass};
use readonce::recognize::{family4_decide, is_rop, sum2_refute};
use readonce::rof::parse_rof;
use readonce::{decompose, Error, Field, FieldElem, MultilinearPoly, Rof, RopSum};
use serde_json::{json, Value};
use thiserror::Error as ThisError;

pub use polytext::parse_poly;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("invalid argument: {0}")]
    Usage(String),
}

impl CliError {
    /// 2 for malformed input, 3 for everything that parsed but could not run.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Parse { .. }) => 2,
            CliError::Core(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "readonce",
    version,
    about = "Read-once polynomials and sums of them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct PolyOpts {
    /// `q` for the rationals or `fp:<p>` for a prime field.
    #[arg(long, default_value = "q")]
    pub field: String,
    /// Number of variables (default: the largest index used).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a polynomial in canonical form.
    Parse {
        #[command(flatten)]
        opts: PolyOpts,
        /// PolyText, or a file containing it.
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Expand a polynomial or ROF, optionally at a point.
    Eval {
        #[command(flatten)]
        opts: PolyOpts,
        /// Comma-separated values for x1..xn.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Discrete partial derivative in one variable.
    Diff {
        #[command(flatten)]
        opts: PolyOpts,
        #[arg(long)]
        var: usize,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Commutator of two variables.
    Commutator {
        #[command(flatten)]
        opts: PolyOpts,
        /// `i,j`
        #[arg(long)]
        vars: String,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Decide whether a polynomial is read-once.
    IsRop {
        #[command(flatten)]
        opts: PolyOpts,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Write a polynomial as a verified sum of ROFs.
    Decompose {
        #[command(flatten)]
        opts: PolyOpts,
        /// pairing | generic | symmetric:n,a,b | sympoly4:a0,a1,a2,a3,a4
        #[arg(long, allow_hyphen_values = true)]
        strategy: String,
        /// Target for `pairing` and `generic`.
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Decide whether a member of the four-variable family is a sum of two ROPs.
    Check2rop {
        #[command(flatten)]
        opts: PolyOpts,
        /// `a,b,c`
        #[arg(long, allow_hyphen_values = true)]
        family: String,
    },
    /// Try to certify that a 4-variate polynomial is not a sum of two ROPs.
    Refute2 {
        #[command(flatten)]
        opts: PolyOpts,
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Minimal number of ROP summands by exhaustive search over F_p.
    Oracle {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long = "min-k", allow_hyphen_values = true)]
        min_k: String,
        /// Class file to load, or to create when absent.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Check that a sum of ROFs equals a target polynomial.
    Verify {
        #[command(flatten)]
        opts: PolyOpts,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// One ROF per line, or JSON with a "summands" list.
        rofsum: String,
    },
}

pub fn parse_field(text: &str) -> CliResult<Field> {
    match text {
        "q" | "Q" => Ok(Field::Rationals),
        _ => {
            let p = text
                .strip_prefix("fp:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| CliError::Usage(format!("unknown field '{text}'")))?;
            Ok(Field::prime(p)?)
        }
    }
}

/// The argument itself, or the contents of the file it names.
fn read_input(arg: &str) -> CliResult<String> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(fs::read_to_string(path).map_err(Error::from)?)
    } else {
        Ok(arg.to_string())
    }
}

fn load_poly(arg: &str, opts: &PolyOpts) -> CliResult<MultilinearPoly> {
    let field = parse_field(&opts.field)?;
    Ok(parse_poly(read_input(arg)?.trim(), field, opts.n)?)
}

fn scalar_list(text: &str, field: Field) -> CliResult<Vec<FieldElem>> {
    Ok(text
        .split(',')
        .map(|s| field.parse_elem(s.trim()))
        .collect::<readonce::Result<_>>()?)
}

fn index_list(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad index '{s}'")))
        })
        .collect()
}

fn sum_json(sum: &RopSum) -> Value {
    json!(sum
        .summands()
        .iter()
        .map(Rof::to_string)
        .collect::<Vec<_>>())
}

fn rof_sum_from_text(text: &str, field: Field) -> CliResult<Vec<Rof>> {
    let trimmed = text.trim_start();
    let lines: Vec<String> = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse {
            position: e.column(),
            message: e.to_string(),
        })?;
        let list = v.get("summands").unwrap_or(&v);
        list.as_array()
            .and_then(|a| a.iter().map(|s| s.as_str().map(String::from)).collect())
            .ok_or_else(|| Error::Parse {
                position: 0,
                message: "expected a list of formula strings".into(),
            })?
    } else {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect()
    };
    Ok(lines
        .iter()
        .map(|l| parse_rof(l, field))
        .collect::<readonce::Result<_>>()?)
}

fn decompose_with(
    strategy: &str,
    poly: Option<&MultilinearPoly>,
    field: Field,
) -> CliResult<(RopSum, MultilinearPoly)> {
    let need = || {
        poly.cloned()
            .ok_or_else(|| CliError::Usage(format!("strategy '{strategy}' needs a polynomial")))
    };
    let (name, params) = strategy.split_once(':').unwrap_or((strategy, ""));
    match name {
        "pairing" => {
            let p = need()?;
            Ok((decompose::pair_monomials(&p)?, p))
        }
        "generic" => {
            let p = need()?;
            Ok((decompose::generic(&p)?, p))
        }
        "symmetric" => {
            let parts: Vec<&str> = params.split(',').collect();
            let [n, a, b] = parts[..] else {
                return Err(CliError::Usage("symmetric needs n,a,b".into()));
            };
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad variable count '{n}'")))?;
            let (a, b) = (field.parse_elem(a.trim())?, field.parse_elem(b.trim())?);
            let sum = decompose::symmetric_halves(n, &a, &b)?;
            let target = readonce::mpoly::m_poly(n, &a, &b)?;
            Ok((sum, target))
        }
        "sympoly4" => {
            let c: [FieldElem; 5] = scalar_list(params, field)?
                .try_into()
                .map_err(|_| CliError::Usage("sympoly4 needs five coefficients".into()))?;
            let sum = decompose::sympoly4(&c)?;
            let mut target = MultilinearPoly::zero(4, field)?;
            for (k, ck) in c.iter().enumerate() {
                let s = readonce::mpoly::elementary_symmetric(4, k, field)?;
                target = target.add(&s.scale(ck)?)?;
            }
            Ok((sum, target))
        }
        _ => Err(CliError::Usage(format!("unknown strategy '{strategy}'"))),
    }
}

fn oracle_class(p: u64, n: usize, cache: Option<&Path>) -> CliResult<RopClass> {
    match cache {
        Some(path) if path.exists() => {
            let class = RopClass::load(path)?;
            if class.p() != p || class.n() != n {
                return Err(Error::ParameterMismatch(format!(
                    "cache holds F_{} with {} variables",
                    class.p(),
                    class.n()
                ))
                .into());
            }
            Ok(class)
        }
        Some(path) => {
            let class = oracle::enumerate_rops(p, n)?;
            class.save(path)?;
            Ok(class)
        }
        None => Ok(oracle::enumerate_rops(p, n)?),
    }
}

/// Runs one command and returns what it prints.
pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Parse { opts, poly } => Ok(load_poly(&poly, &opts)?.to_string()),
        Command::Eval { opts, at, input } => {
            let field = parse_field(&opts.field)?;
            let text = read_input(&input)?;
            let text = text.trim();
            let poly = if text.starts_with('(') {
                let rof = parse_rof(text, field)?;
                rof.evaluate(opts.n.unwrap_or(0).max(rof.max_var()))?
            } else {
                parse_poly(text, field, opts.n)?
            };
            match at {
                None => Ok(poly.to_string()),
                Some(at) => {
                    let point = scalar_list(&at, field)?;
                    Ok(poly
                        .with_num_vars(point.len())?
                        .evaluate(&point)?
                        .to_string())
                }
            }
        }
        Command::Diff { opts, var, poly } => Ok(load_poly(&poly, &opts)?.partial(var)?.to_string()),
        Command::Commutator { opts, vars, poly } => {
            let idx = index_list(&vars)?;
            let [i, j] = idx[..] else {
                return Err(CliError::Usage("--vars takes i,j".into()));
            };
            Ok(load_poly(&poly, &opts)?.commutator(i, j)?.to_string())
        }
        Command::IsRop { opts, poly } => {
            let witness = is_rop(&load_poly(&poly, &opts)?);
            Ok(json!({
                "is_rop": witness.is_some(),
                "witness": witness.map(|r| r.to_string()),
            })
            .to_string())
        }
        Command::Decompose {
            opts,
            strategy,
            poly,
        } => {
            let field = parse_field(&opts.field)?;
            let poly = poly.map(|p| load_poly(&p, &opts)).transpose()?;
            let (sum, target) = decompose_with(&strategy, poly.as_ref(), field)?;
            let verified = sum.verify_against(&target)?;
            Ok(json!({"summands": sum_json(&sum), "verified": verified}).to_string())
        }
        Command::Check2rop { opts, family } => {
            let field = parse_field(&opts.field)?;
            let v: [FieldElem; 3] = scalar_list(&family, field)?
                .try_into()
                .map_err(|_| CliError::Usage("--family takes a,b,c".into()))?;
            Ok(family4_decide(&v[0], &v[1], &v[2])?.to_json().to_string())
        }
        Command::Refute2 { mut opts, poly } => {
            opts.n = Some(opts.n.unwrap_or(4));
            Ok(sum2_refute(&load_poly(&poly, &opts)?)?
                .to_json()
                .to_string())
        }
        Command::Oracle {
            p,
            n,
            min_k,
            cache,
            kmax,
        } => {
            let packer = oracle::Packer::new(p, n)?;
            let target = parse_poly(read_input(&min_k)?.trim(), packer.field(), Some(n))?;
            let class = oracle_class(p, n, cache.as_deref())?;
            let k = oracle::min_k(packer.pack(&target)?, &class, kmax)?;
            Ok(json!({ "min_k": k }).to_string())
        }
        Command::Verify {
            opts,
            target,
            rofsum,
        } => {
            let field = parse_field(&opts.field)?;
            let target = parse_poly(read_input(&target)?.trim(), field, opts.n)?;
            let rofs = rof_sum_from_text(&read_input(&rofsum)?, field)?;
            let n = rofs.iter().map(Rof::max_var).fold(target.n(), usize::max);
            let sum = RopSum::from_summands(field, n, rofs)?;
            let equal = sum.verify_against(&target.with_num_vars(n)?)?;
            Ok(json!({ "equal": equal }).to_string())
        }
    }
}
