use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use flagwork::bkn::{bkn_matrix, crosscheck_line, crosscheck_random};
use flagwork::curvature::{check_ks_positive, check_nakano, from_json_str, grassmannian_curvature};
use flagwork::omega::{exterior_weights, hodge_numbers};
use flagwork::vanish::{parse_expr, query_vanishing, sharpness_check, QueryOptions};
use flagwork::{bott_cohomology, bott_flag, BlockWeight, CurvatureTensor, FlagType, Weight};

#[derive(Parser)]
#[command(name = "flagwork", version, about = "Bott cohomology, curvature positivity and vanishing queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Eigenvalue tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Random samples per side for sampling checks.
    #[arg(long, global = true, default_value_t = 500)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also evaluate the conjectural predicate in `vanish`.
    #[arg(long, global = true)]
    conjectural: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology of a homogeneous line bundle on a flag manifold.
    Bott {
        /// Weight, or block weight when --flag is given.
        #[arg(long, value_parser = ints, allow_hyphen_values = true)]
        weight: Ints,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, value_parser = cuts)]
        flag: Option<Cuts>,
    },
    /// Weights of the p-th exterior power of the cotangent space of a flag manifold.
    Omega {
        #[arg(long, value_parser = cuts)]
        flag: Cuts,
        #[arg(long)]
        p: usize,
    },
    /// Hodge numbers h[p][q] of a flag manifold.
    Hodge {
        #[arg(long, value_parser = cuts)]
        flag: Cuts,
    },
    /// Spectrum of the pointwise commutator on (p, q)-forms.
    Bkn {
        #[command(flatten)]
        source: TensorSource,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
    },
    /// Randomized check of (k, s)-positivity, or exact Nakano positivity.
    Positivity {
        #[command(flatten)]
        source: TensorSource,
        #[arg(long, required_unless_present = "nakano")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "nakano")]
        s: Option<usize>,
        #[arg(long, conflicts_with_all = ["k", "s"])]
        nakano: bool,
    },
    /// Vanishing-theorem reports for H^{p,q}(X, expr).
    Vanish {
        /// Bundle expression, e.g. "K*E{n=3,r=2,griffiths_k=1} * det(E)".
        expr: String,
        /// Base dimension, unless an atom declares n=.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        /// Flag type for the flag-weight predicate (with --weight).
        #[arg(long, value_parser = cuts, requires = "weight")]
        flag: Option<Cuts>,
        /// Block weight for the flag-weight predicate.
        #[arg(long, value_parser = ints, allow_hyphen_values = true, requires = "flag")]
        weight: Option<Ints>,
    },
    /// Compare the k-positive line bundle region with Künneth on P^k × P^(n-k).
    Sharpness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Twist on the second factor; defaults to n, or n + 1 when k = 0.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
    },
    /// Compare the line-bundle closed form with the assembled operator.
    Crosscheck {
        /// Base dimension for random (ν, μ); ignored when --nu and --mu are given.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_parser = floats, allow_hyphen_values = true, requires = "mu")]
        nu: Option<Floats>,
        #[arg(long, value_parser = floats, requires = "nu")]
        mu: Option<Floats>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TensorSource {
    /// Curvature tensor JSON file.
    #[arg(long)]
    tensor: Option<String>,
    /// Built-in tensor, e.g. grassmannian:4,2.
    #[arg(long)]
    builtin: Option<String>,
}

type Ints = Vec<i64>;
type Cuts = Vec<usize>;
type Floats = Vec<f64>;

fn list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|x| x.parse::<T>().map_err(|_| format!("cannot read '{x}' in '{s}'")))
        .collect()
}

fn ints(s: &str) -> Result<Ints, String> {
    list(s)
}

fn cuts(s: &str) -> Result<Cuts, String> {
    list(s)
}

fn floats(s: &str) -> Result<Floats, String> {
    list(s)
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<flagwork::Error> for Failure {
    fn from(e: flagwork::Error) -> Self {
        match e {
            flagwork::Error::GeneratorFailure(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::Internal(e.to_string()))
}

fn load(source: &TensorSource) -> Result<CurvatureTensor, Failure> {
    if let Some(path) = &source.tensor {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        return Ok(from_json_str(&text)?);
    }
    let name = source.builtin.as_deref().unwrap_or_default();
    match name.split_once(':') {
        Some(("grassmannian", args)) => match list::<usize>(args).map_err(Failure::Input)?.as_slice() {
            [n, d] => Ok(grassmannian_curvature(*n, *d)?),
            _ => Err(Failure::Input(format!("grassmannian takes n,d, got '{args}'"))),
        },
        _ => Err(Failure::Input(format!("unknown builtin '{name}'; known: grassmannian:n,d"))),
    }
}

fn envelope(cli: &Cli, result: Value) -> Value {
    json!({ "seed": cli.seed, "tolerance": cli.tol, "result": result })
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Bott { weight, rank, flag } => {
            let res = match flag {
                Some(c) => {
                    let a_s = BlockWeight::new(weight.clone(), FlagType::new(c.clone())?)?;
                    if rank.is_some_and(|r| r != a_s.flag().rank()) {
                        return Err(Failure::Input("--rank disagrees with --flag".into()));
                    }
                    bott_flag(&a_s)?
                }
                None => bott_cohomology(&Weight(weight.clone()), rank.unwrap_or(weight.len()))?,
            };
            to_value(&res)
        }
        Command::Omega { flag, p } => to_value(&exterior_weights(&FlagType::new(flag.clone())?, *p)?),
        Command::Hodge { flag } => to_value(&big_table(&hodge_numbers(&FlagType::new(flag.clone())?))),
        Command::Bkn { source, p, q } => {
            let t = load(source)?;
            let n = t.n();
            let ps: Vec<usize> = p.map_or_else(|| (0..=n).collect(), |x| vec![x]);
            let qs: Vec<usize> = q.map_or_else(|| (0..=n).collect(), |x| vec![x]);
            let mut spectra = Vec::new();
            for &p in &ps {
                for &q in &qs {
                    let vals = bkn_matrix(&t, p, q)?.eigenvalues();
                    let min = vals.first().copied();
                    let kernel = vals.iter().filter(|&&x| x.abs() <= cli.tol).count();
                    spectra.push(json!({
                        "p": p, "q": q, "min_eigenvalue": min, "kernel_dim": kernel,
                        "positive_definite": min.is_some_and(|m| m > cli.tol), "eigenvalues": vals,
                    }));
                }
            }
            Ok(envelope(cli, json!({ "n": n, "r": t.r(), "spectra": spectra })))
        }
        Command::Positivity { source, k, s, nakano } => {
            let t = load(source)?;
            let report = match (nakano, k, s) {
                (true, _, _) => check_nakano(&t, cli.tol),
                (false, Some(k), Some(s)) => check_ks_positive(&t, *k, *s, cli.samples, cli.tol, cli.seed)?,
                _ => return Err(Failure::Input("need --k and --s, or --nakano".into())),
            };
            Ok(envelope(cli, to_value(&report)?))
        }
        Command::Vanish { expr, n, p, q, flag, weight } => {
            let parsed = parse_expr(expr)?;
            let n = match (n, parsed.n) {
                (Some(a), Some(b)) if *a != b => {
                    return Err(Failure::Input(format!("--n {a} disagrees with n={b} in the expression")))
                }
                (Some(a), _) => *a,
                (None, Some(b)) => b,
                (None, None) => return Err(Failure::Input("base dimension missing: pass --n or n= on an atom".into())),
            };
            let flag_weight = match (flag, weight) {
                (Some(c), Some(w)) => Some(BlockWeight::new(w.clone(), FlagType::new(c.clone())?)?),
                _ => None,
            };
            let opts = QueryOptions { conjectural: cli.conjectural, flag_weight };
            let reports = query_vanishing(&parsed.expr, n, *p, *q, &opts)?;
            if cli.format == Format::Table {
                let rows: Vec<Value> = reports
                    .iter()
                    .map(|r| {
                        let unmet: Vec<&str> =
                            r.hypothesis_trace.iter().filter(|x| !x.satisfied).map(|x| x.statement.as_str()).collect();
                        json!({
                            "theorem": r.theorem_id,
                            "verdict": if r.vanishes() { "vanishes" } else { "not_applicable" },
                            "conjectural": r.conjectural,
                            "unmet": unmet.join("; "),
                        })
                    })
                    .collect();
                return Ok(Value::Array(rows));
            }
            to_value(&reports)
        }
        Command::Sharpness { n, k, twist } => {
            let twist = twist.unwrap_or(if *k == 0 { *n as i64 + 1 } else { *n as i64 });
            to_value(&sharpness_check(*n, *k, twist)?)
        }
        Command::Crosscheck { n, nu, mu } => match (nu, mu) {
            (Some(nu), Some(mu)) => {
                let m = nu.len();
                let mut cells = Vec::new();
                let mut max: f64 = 0.0;
                for p in 0..=m {
                    for q in 0..=m {
                        let d = crosscheck_line(nu, mu, p, q)?;
                        max = max.max(d);
                        cells.push(json!({ "p": p, "q": q, "deviation": d }));
                    }
                }
                Ok(envelope(cli, json!({ "n": m, "max_deviation": max, "pass": max <= cli.tol, "cells": cells })))
            }
            _ => {
                let summary = crosscheck_random(*n, cli.samples, cli.seed)?;
                let mut v = to_value(&summary)?;
                v["pass"] = json!(summary.max_deviation <= cli.tol);
                Ok(envelope(cli, v))
            }
        },
    }
}

fn big_table(t: &[Vec<BigUint>]) -> Vec<Vec<Value>> {
    let big = |x: &BigUint| u64::try_from(x).map_or_else(|_| json!(x.to_string()), |v| json!(v));
    t.iter().map(|row| row.iter().map(big).collect()).collect()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|j| rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().enumerate().map(|(j, c)| format!("{c:>w$}", w = widths[j])).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

/// Aligned text for people; no stability guarantee.
fn render_table(v: &Value) -> String {
    match v {
        Value::Array(rows) if rows.iter().all(|r| r.as_array().is_some_and(|c| c.iter().all(|x| !x.is_array() && !x.is_object())))
            && !rows.is_empty() =>
        {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| r.as_array().unwrap().iter().map(scalar).collect()).collect();
            grid(&cells)
        }
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => {
            let mut keys: Vec<String> = Vec::new();
            for r in rows {
                for k in r.as_object().unwrap().keys() {
                    if !keys.contains(k) {
                        keys.push(k.clone());
                    }
                }
            }
            let mut cells = vec![keys.clone()];
            for r in rows {
                cells.push(keys.iter().map(|k| r.get(k).map_or_else(String::new, scalar)).collect());
            }
            grid(&cells)
        }
        Value::Object(map) => {
            let mut out = String::new();
            let mut flat = Vec::new();
            for (k, x) in map {
                match x {
                    Value::Array(a) if !a.is_empty() && (a[0].is_object() || a[0].is_array()) => {
                        let _ = write!(out, "\n{k}:\n{}", render_table(x));
                    }
                    Value::Object(_) => {
                        let _ = write!(out, "\n{k}:\n{}", render_table(x));
                    }
                    _ => flat.push(vec![k.clone(), scalar(x)]),
                }
            }
            let body = if flat.is_empty() { String::new() } else { grid(&flat) };
            body + &out
        }
        other => format!("{}\n", scalar(other)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(v) => {
            match cli.format {
                Format::Json => println!("{v}"),
                Format::Table => print!("{}", render_table(&v)),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
