use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use ultragh::format::{to_json, RawSpace};
use ultragh::{
    certificate, chain_glue, closed_quotient, crowd_family, disjoint_amalgam, epsilon_net,
    from_dendrogram, glue, hausdorff_distance, indices_of, isometry, merge_duplicates,
    random_space, restrict, single_linkage, to_dendrogram, two_point_space, ugh_distance,
    ugh_oracle, uk_violation, Dendrogram, FiniteUltrametricSpace, GlueSpec, Rational,
    SpectrumConstraint,
};

#[derive(Debug, Parser)]
#[command(name = "ultragh", version, about = "Exact computations on finite ultrametric spaces")]
pub struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(short = 'o', long = "output", global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the ultrametric axioms and print the normalized space.
    Validate {
        space: PathBuf,
        /// Collapse points at distance zero before validating.
        #[arg(long)]
        merge_duplicates: bool,
    },
    /// Print the sorted distinct distance values.
    Spectrum { space: PathBuf },
    /// Closed-ball quotient at scale `t`.
    Quotient {
        space: PathBuf,
        #[arg(long)]
        t: Rational,
    },
    /// Hausdorff distance between two subsets.
    Hausdorff {
        space: PathBuf,
        /// Labels as a JSON array, a comma list, or `@file`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Greedy epsilon-net in label order.
    Net {
        space: PathBuf,
        #[arg(long)]
        eps: Rational,
        /// Print the induced subspace instead of the labels.
        #[arg(long)]
        restrict: bool,
    },
    /// Glue two spaces along identified points.
    Glue { spec: PathBuf },
    /// Glue a chain of spaces, each along points shared with the previous one.
    Chain { spec: PathBuf },
    /// Disjoint union with every cross distance equal to `s`.
    Amalgam {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        s: Rational,
    },
    /// Gromov-Hausdorff ultrametric between two spaces.
    Ugh {
        a: PathBuf,
        b: PathBuf,
        /// Write a certificate (common space and embeddings) to this file.
        #[arg(long, value_name = "FILE")]
        certificate: Option<PathBuf>,
        /// Cross-check against exhaustive search (at most 4 points each).
        #[arg(long)]
        oracle: bool,
    },
    /// Pairwise distance matrix over several spaces.
    Pairwise {
        #[arg(required = true, num_args = 1..)]
        spaces: Vec<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Whether two spaces are isometric, with a witness bijection.
    Isometric { a: PathBuf, b: PathBuf },
    /// Canonical dendrogram of a space.
    Dendrogram { space: PathBuf },
    /// Space of lowest-common-ancestor heights of a dendrogram.
    Flatten { tree: PathBuf },
    /// Generate a space from a standard family.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Subdominant (single-linkage) ultrametric of a metric.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        merge_duplicates: bool,
    },
    /// Whether every distance value lies in the given set.
    #[command(name = "in-uk")]
    InUk {
        space: PathBuf,
        /// Comma-separated values, must include 0.
        #[arg(long)]
        k: String,
    },
}

#[derive(Debug, Subcommand)]
enum Family {
    /// Two points at distance `c`.
    #[command(name = "two-point")]
    TwoPoint {
        #[arg(long)]
        c: Rational,
    },
    /// A space plus `n` fresh points clustered at scale `c` around a base point.
    Crowd(CrowdArgs),
    /// Points 1, 1/2, ..., 2^-depth with d(x, y) = max(x, y).
    Cauchy {
        #[arg(long)]
        depth: u32,
    },
    /// Seeded random space with values in `k`.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: String,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct CrowdArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    base: String,
    #[arg(long)]
    c: Rational,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Domain(String),
    #[error("oracle mismatch: quotient scan gives {scan}, oracle gives {oracle}")]
    OracleMismatch { scan: Rational, oracle: Rational },
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let io_err = |source| CliError::Io { path: path.display().to_string(), source };
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })
}

fn read_space(path: &Path) -> Result<FiniteUltrametricSpace, CliError> {
    read_space_with(path, false)
}

fn read_space_with(path: &Path, merge: bool) -> Result<FiniteUltrametricSpace, CliError> {
    let raw: RawSpace = read_json(path)?;
    let (points, dist) = if merge { merge_duplicates(raw.points, raw.dist) } else { (raw.points, raw.dist) };
    RawSpace { points, dist }
        .validate()
        .map_err(|e| CliError::Input { path: path.display().to_string(), message: e.to_string() })
}

fn parse_labels(arg: &str) -> Result<Vec<String>, CliError> {
    let parse = |text: &str, origin: &str| {
        serde_json::from_str::<Vec<String>>(text)
            .map_err(|e| CliError::Input { path: origin.to_string(), message: e.to_string() })
    };
    if let Some(file) = arg.strip_prefix('@') {
        return parse(&read_text(Path::new(file))?, file);
    }
    if arg.trim_start().starts_with('[') {
        return parse(arg, "<inline>");
    }
    Ok(arg.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
}

fn parse_constraint(arg: &str) -> Result<SpectrumConstraint, CliError> {
    let values = arg
        .split(',')
        .map(|s| s.trim().parse::<Rational>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(domain)?;
    SpectrumConstraint::new(values).map_err(domain)
}

fn labels_of(space: &FiniteUltrametricSpace, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| space.label(i).to_string()).collect()
}

fn emit(output: &Option<PathBuf>, value: &(impl Serialize + ?Sized)) -> Result<(), CliError> {
    write_to(output.as_deref(), &to_json(value))
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let out = &cli.output;
    match cli.command {
        Command::Validate { space, merge_duplicates } => emit(out, &read_space_with(&space, merge_duplicates)?),
        Command::Spectrum { space } => emit(out, read_space(&space)?.spectrum().values()),
        Command::Quotient { space, t } => {
            if t.is_negative() {
                return Err(domain(format!("scale must be nonnegative, got {t}")));
            }
            let x = read_space(&space)?;
            let q = closed_quotient(&x, t);
            let blocks: Vec<Vec<String>> = q.blocks.iter().map(|b| labels_of(&x, b)).collect();
            emit(out, &json!({ "scale": t, "blocks": blocks, "quotient": q.quotient }))
        }
        Command::Hausdorff { space, a, b } => {
            let x = read_space(&space)?;
            let ia = indices_of(&x, &parse_labels(&a)?).map_err(domain)?;
            let ib = indices_of(&x, &parse_labels(&b)?).map_err(domain)?;
            let value = hausdorff_distance(&x, &ia, &ib).map_err(domain)?;
            emit(out, &json!({ "value": value }))
        }
        Command::Net { space, eps, restrict: as_space } => {
            let x = read_space(&space)?;
            let net = epsilon_net(&x, eps).map_err(domain)?;
            if as_space {
                emit(out, &restrict(&x, &net).map_err(domain)?)
            } else {
                emit(out, &json!({ "eps": eps, "net": labels_of(&x, &net) }))
            }
        }
        Command::Glue { spec } => {
            let spec: GlueSpec = read_json(&spec)?;
            emit(out, &glue(&spec).map_err(domain)?)
        }
        Command::Chain { spec } => {
            #[derive(serde::Deserialize)]
            struct ChainFile {
                first: FiniteUltrametricSpace,
                links: Vec<ultragh::ChainLink>,
            }
            let file: ChainFile = read_json(&spec)?;
            emit(out, &chain_glue(&file.first, &file.links).map_err(domain)?.space)
        }
        Command::Amalgam { a, b, s } => {
            let (x, y) = (read_space(&a)?, read_space(&b)?);
            emit(out, &disjoint_amalgam(&x, &y, s).map_err(domain)?)
        }
        Command::Ugh { a, b, certificate: cert_path, oracle } => {
            let (x, y) = (read_space(&a)?, read_space(&b)?);
            let result = ugh_distance(&x, &y);
            let mut body = json!({ "value": result.value, "scale_witness": result.scale_witness });
            if oracle {
                let o = ugh_oracle(&x, &y, None).map_err(domain)?;
                if o != result.value {
                    return Err(CliError::OracleMismatch { scan: result.value, oracle: o });
                }
                body["oracle"] = json!(o);
            }
            if let Some(path) = cert_path {
                let cert = certificate(&x, &y, &result);
                cert.verify(&x, &y).map_err(domain)?;
                write_to(Some(&path), &to_json(&cert))?;
            }
            emit(out, &body)
        }
        Command::Pairwise { spaces, jobs } => {
            let loaded = spaces.iter().map(|p| read_space(p)).collect::<Result<Vec<_>, _>>()?;
            let names: Vec<String> = spaces.iter().map(|p| p.display().to_string()).collect();
            let matrix = pairwise(&loaded, jobs.max(1));
            emit(out, &json!({ "spaces": names, "ugh": matrix }))
        }
        Command::Isometric { a, b } => {
            let (x, y) = (read_space(&a)?, read_space(&b)?);
            let body = match isometry(&x, &y) {
                Some(phi) => {
                    let pairs: Vec<(&str, &str)> =
                        phi.iter().enumerate().map(|(i, &j)| (x.label(i), y.label(j))).collect();
                    json!({ "isometric": true, "bijection": pairs })
                }
                None => json!({ "isometric": false }),
            };
            emit(out, &body)
        }
        Command::Dendrogram { space } => emit(out, &to_dendrogram(&read_space(&space)?)),
        Command::Flatten { tree } => {
            let tree: Dendrogram = read_json(&tree)?;
            emit(out, &from_dendrogram(&tree).map_err(domain)?)
        }
        Command::Gen { family } => emit(out, &generate(family)?),
        Command::Cluster { input, merge_duplicates: merge } => {
            let raw: RawSpace = read_json(&input)?;
            let (points, dist) = if merge { merge_duplicates(raw.points, raw.dist) } else { (raw.points, raw.dist) };
            emit(out, &single_linkage(points, dist).map_err(domain)?)
        }
        Command::InUk { space, k } => {
            let x = read_space(&space)?;
            let body: Value = match uk_violation(&x, &parse_constraint(&k)?) {
                None => json!({ "member": true }),
                Some(v) => json!({ "member": false, "witness": [v.a, v.b, v.value] }),
            };
            emit(out, &body)
        }
    }
}

fn generate(family: Family) -> Result<FiniteUltrametricSpace, CliError> {
    match family {
        Family::TwoPoint { c } => two_point_space(c).map_err(domain),
        Family::Crowd(args) => {
            let y = read_space(&args.space)?;
            crowd_family(&y, &args.base, args.c, args.n).map_err(domain)
        }
        Family::Cauchy { depth } => ultragh::cauchy_sequence(depth).map_err(domain),
        Family::Random { n, k, seed } => random_space(n, &parse_constraint(&k)?, seed).map_err(domain),
    }
}

/// Upper-triangular pairs are split across `jobs` threads; every result is
/// written to its own cell, so the output does not depend on scheduling.
fn pairwise(spaces: &[FiniteUltrametricSpace], jobs: usize) -> Vec<Vec<Rational>> {
    let n = spaces.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let chunk = pairs.len().div_ceil(jobs).max(1);
    let values: Vec<Rational> = std::thread::scope(|scope| {
        let handles: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter().map(|&(i, j)| ugh_distance(&spaces[i], &spaces[j]).value).collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut m = vec![vec![Rational::ZERO; n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        m[i][j] = v;
        m[j][i] = v;
    }
    m
}
