//! Command-line front end. Exit codes: 0 success (and no violations),
//! 1 counterexample found by an assertive verification claim, 2 usage or
//! input error. Diagnostics go to stderr, results to stdout.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::birkhoff::birkhoff_factorize;
use crate::classify::{classify_components_with, to_csv, to_json, Query};
use crate::cohomology::h0_twist;
use crate::experiments::{
    run_prop5, run_prop6, run_twist_reduction, ExperimentReport, Prop5Config, Prop6Config,
    TwistReductionConfig,
};
use crate::field::Prime;
use crate::matrix::LaurentMatrix;
use crate::poset::hasse_diagram;
use crate::splitting::{BBType, SplittingType};

#[derive(Debug)]
pub struct CliError(String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Parser, Debug)]
#[command(name = "hbn", version, about = "Splitting types, stratification posets and exact bundle checks for gonal Brill-Noether loci")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predicted irreducible components of the rank-r locus in degree d
    Classify {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        r: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        /// Also list the non-maximal b = 1, v > 0 strata
        #[arg(long)]
        include_nonmaximal: bool,
    },
    /// Hasse diagram of the downward closure of a splitting type
    Poset {
        /// Root splitting type, comma-separated (default: balanced type for g, k, d)
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        #[arg(long)]
        g: Option<i64>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        d: Option<i64>,
        /// Truncation bound on the u-invariant (default: g)
        #[arg(long)]
        umax: Option<i64>,
        #[arg(long, value_enum, default_value = "dot")]
        format: OutputFormat,
    },
    /// u-invariant and twist data of a splitting type
    U {
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Factor a transition matrix file into L * diag * R
    Factor {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Twisted section counts of a matrix presentation, by exact kernels
    Cohomology {
        #[arg(long)]
        file: PathBuf,
        /// Single twist to evaluate
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        /// Profile range, inclusive
        #[arg(long, allow_hyphen_values = true)]
        from: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Run randomized bundle-level verification experiments
    Verify {
        /// Comma-separated subset of: prop5, twist_reduction, prop6
        #[arg(long)]
        claims: String,
        /// Pattern a,b,y,u,v for prop5 (x is derived from --k)
        #[arg(long, allow_hyphen_values = true)]
        bb: Option<String>,
        #[arg(long)]
        k: Option<i64>,
        /// Splitting type for twist_reduction / prop6
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        /// Gap twist for prop6
        #[arg(long, allow_hyphen_values = true)]
        eprime: Option<i64>,
        #[arg(long, default_value = "200")]
        trials: u64,
        #[arg(long, default_value = "101")]
        prime: u64,
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Worker cap (also honors HBN_THREADS)
        #[arg(long)]
        workers: Option<usize>,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(found_violation) => {
            if found_violation {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn parse_splitting(text: &str) -> Result<SplittingType, CliError> {
    let values: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError(format!("bad splitting type '{text}': {e}")))?;
    let sorted = values.windows(2).all(|w| w[0] <= w[1]);
    if !sorted {
        eprintln!("warning: splitting type {text} was not sorted; sorting");
    }
    Ok(SplittingType::new(values)?)
}

fn parse_bb(text: &str, k: i64) -> Result<BBType, CliError> {
    let nums: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError(format!("bad pattern '{text}': {e}")))?;
    if nums.len() != 5 {
        return Err(CliError(format!("pattern needs a,b,y,u,v, got {} values", nums.len())));
    }
    let (a, b, y, u, v) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    if y < 0 || u < 0 || v < 0 {
        return Err(CliError("pattern multiplicities must be nonnegative".into()));
    }
    let x = k - y - u - v;
    if x < 0 {
        return Err(CliError(format!("pattern does not fit in length {k}: x = {x}")));
    }
    Ok(BBType::new(a, b, x as usize, y as usize, u as usize, v as usize)?)
}

fn dispatch(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Classify { g, k, d, r, format, include_nonmaximal } => {
            let query = Query::new(g, k, d, r)?;
            let records = classify_components_with(&query, include_nonmaximal);
            match format {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&to_json(&query, &records))?)
                }
                OutputFormat::Csv => print!("{}", to_csv(&records)),
                OutputFormat::Text => {
                    println!("components of the rank-{r} locus (g = {g}, k = {k}, d = {d}):");
                    if records.is_empty() {
                        println!("  none");
                    }
                    for rec in &records {
                        let extra = match &rec.translation {
                            Some(t) => {
                                format!(", translate of {} by {}", t.base.splitting_type, t.a)
                            }
                            None => String::new(),
                        };
                        println!(
                            "  {} kind {} dim {}{}{}{}",
                            rec.splitting_type,
                            rec.kind,
                            rec.dim,
                            if rec.irreducible { ", irreducible" } else { "" },
                            if rec.finite_points { ", finite set of points" } else { "" },
                            extra
                        );
                    }
                }
                OutputFormat::Dot => return Err(CliError("classify has no dot output".into())),
            }
            Ok(false)
        }
        Command::Poset { e, g, k, d, umax, format } => {
            let root = match (&e, g, k, d) {
                (Some(text), _, _, _) => parse_splitting(text)?,
                (None, Some(g), Some(k), Some(d)) => {
                    if k < 1 {
                        return Err(CliError("k must be positive".into()));
                    }
                    SplittingType::balanced(k as usize, d - g + 1 - k)?
                }
                _ => {
                    return Err(CliError(
                        "poset needs either --e or all of --g, --k, --d".into(),
                    ))
                }
            };
            let u_max = match umax.or(g) {
                Some(u) if u >= root.u_invariant() => u,
                Some(u) => {
                    return Err(CliError(format!(
                        "u_max = {u} is below u = {} of the root",
                        root.u_invariant()
                    )))
                }
                None => return Err(CliError("poset needs --umax (or --g as default)".into())),
            };
            let diagram = hasse_diagram(&root, u_max);
            match format {
                OutputFormat::Dot => print!("{}", diagram.to_dot(g)),
                OutputFormat::Text => {
                    for node in &diagram.nodes {
                        println!("node {} u {}", node.e, node.u);
                    }
                    for &(lo, hi) in &diagram.edges {
                        println!("edge {} -> {}", diagram.nodes[lo].e, diagram.nodes[hi].e);
                    }
                }
                OutputFormat::Json => {
                    let nodes: Vec<_> = diagram
                        .nodes
                        .iter()
                        .map(|n| serde_json::json!({"e": n.e, "u": n.u}))
                        .collect();
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&serde_json::json!({
                            "nodes": nodes,
                            "edges": diagram.edges,
                        }))?
                    );
                }
                OutputFormat::Csv => return Err(CliError("poset has no csv output".into())),
            }
            Ok(false)
        }
        Command::U { e, format } => {
            let e = parse_splitting(&e)?;
            let u = e.u_invariant();
            match format {
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "e": e,
                        "u": u,
                        "total": e.total(),
                        "h0_at_zero": e.h0(0),
                    }))?
                ),
                _ => {
                    println!("e = {e}");
                    println!("u = {u}");
                    println!("total = {}", e.total());
                    println!("h0 at twist 0 = {}", e.h0(0));
                }
            }
            Ok(false)
        }
        Command::Factor { file, format } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError(format!("cannot read {}: {e}", file.display())))?;
            let m = LaurentMatrix::parse_text(&text)?;
            let fact = birkhoff_factorize(&m)?;
            match format {
                OutputFormat::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "e": fact.splitting,
                        "left": fact.left.to_text(),
                        "diag": fact.diagonal().to_text(),
                        "right": fact.right.to_text(),
                    }))?
                ),
                _ => {
                    println!("splitting type: {}", fact.splitting);
                    println!("left factor (unimodular over F_p[1/t]):\n{}", fact.left.to_text());
                    println!("diagonal:\n{}", fact.diagonal().to_text());
                    println!("right factor (unimodular over F_p[t]):\n{}", fact.right.to_text());
                }
            }
            Ok(false)
        }
        Command::Cohomology { file, twist, from, to, format } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError(format!("cannot read {}: {e}", file.display())))?;
            let m = LaurentMatrix::parse_text(&text)?;
            let window = match (twist, from, to) {
                (Some(n), None, None) => n..=n,
                (None, Some(a), Some(b)) if a <= b => a..=b,
                (None, None, None) => {
                    return Err(CliError("cohomology needs --twist or --from/--to".into()))
                }
                _ => return Err(CliError("give either --twist or a valid --from/--to".into())),
            };
            let profile: Vec<(i64, i64)> = window.map(|n| (n, h0_twist(&m, n))).collect();
            match format {
                OutputFormat::Json => {
                    let rows: Vec<_> = profile
                        .iter()
                        .map(|(n, h)| serde_json::json!({"twist": n, "h0": h}))
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&rows)?);
                }
                _ => {
                    for (n, h) in profile {
                        println!("h0(twist {n}) = {h}");
                    }
                }
            }
            Ok(false)
        }
        Command::Verify { claims, bb, k, e, eprime, trials, prime, seed, workers } => {
            let prime = Prime::new(prime)?;
            let mut found_violation = false;
            for claim in claims.split(',') {
                let report = match claim.trim() {
                    "prop5" => {
                        let bb_text = bb
                            .as_deref()
                            .ok_or_else(|| CliError("prop5 needs --bb a,b,y,u,v".into()))?;
                        let k = k.ok_or_else(|| CliError("prop5 needs --k".into()))?;
                        let cfg = Prop5Config {
                            bb: parse_bb(bb_text, k)?,
                            trials,
                            prime,
                            seed,
                            workers,
                        };
                        let report = run_prop5(&cfg)?;
                        found_violation |= report.violation_count() > 0;
                        report
                    }
                    "twist_reduction" => {
                        let e_text = e
                            .as_deref()
                            .ok_or_else(|| CliError("twist_reduction needs --e".into()))?;
                        let cfg = TwistReductionConfig {
                            e: parse_splitting(e_text)?,
                            trials,
                            prime,
                            seed,
                            workers,
                        };
                        let report = run_twist_reduction(&cfg)?;
                        found_violation |= report.violation_count() > 0;
                        report
                    }
                    "prop6" => {
                        let e_text =
                            e.as_deref().ok_or_else(|| CliError("prop6 needs --e".into()))?;
                        let e_prime =
                            eprime.ok_or_else(|| CliError("prop6 needs --eprime".into()))?;
                        let cfg = Prop6Config {
                            e: parse_splitting(e_text)?,
                            e_prime,
                            trials,
                            prime,
                            seed,
                            workers,
                        };
                        // exploratory: tabulated, never fails the run
                        run_prop6(&cfg)?
                    }
                    other => return Err(CliError(format!("unknown claim '{other}'"))),
                };
                print_report(&report);
            }
            Ok(found_violation)
        }
    }
}

fn print_report(report: &ExperimentReport) {
    println!("{}", report.to_json());
    for claim in &report.claims {
        eprintln!(
            "{} / {}: {} trials, {} violations",
            report.experiment, claim.name, claim.trials, claim.violations
        );
    }
}
