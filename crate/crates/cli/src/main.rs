//! `gozinta`: verify, search and transform sets of Gozinta boxes.
//!
//! Exit codes: 0 when the check passes or a witness is found, 1 when
//! verification fails, a search is infeasible or nothing is found, 2 for
//! usage and input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gozinta::achievability::{
    brute_force_search, case_count, search, verify_impossibility, BruteError, PermSpec, SearchResult,
};
use gozinta::catalog::{catalog, catalog_entry};
use gozinta::constructions::{
    boost_concat, boost_duplicate, boost_inverse, gen_triple, reduce_dimension, replace_gap_side,
    restore_expansion_bound, scale, shift,
};
use gozinta::format::{parse, render};
use gozinta::nesting::{classify_pair, render_diagram, verify_with};
use gozinta::{Dims, Permutation, Scalar, TrickInstance};

#[derive(Parser)]
#[command(
    name = "gozinta",
    version,
    about = "Exact checks and searches for Gozinta boxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every arrangement of a box file.
    Verify {
        file: PathBuf,
        /// Allow expansions beyond twice the closed side.
        #[arg(long)]
        no_bound: bool,
    },
    /// Print the diagram of every arrangement, outermost box first.
    Diagram { file: PathBuf },
    /// Classify two 3D boxes, e.g. `classify 6,8,10 7,9,11`.
    Classify { a: String, b: String },
    /// Decide whether the given orders are jointly achievable.
    Achieve {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        boxes: usize,
        /// Order in one-line notation (`2413`) or letters (`BDAC`).
        #[arg(long = "perm", required = true)]
        perms: Vec<Permutation>,
        /// Only search normalized natural/reverse cases.
        #[arg(long)]
        normalize: bool,
        /// Write the witness, shifted to respect the expansion bound.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Exhaust every case and report whether all are infeasible.
    Impossible {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        boxes: usize,
        /// Defaults to the reverse order.
        #[arg(long = "perm")]
        perms: Vec<Permutation>,
    },
    /// Bounded integer search for a witness.
    Brute {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        boxes: usize,
        #[arg(long)]
        max_side: i64,
        /// Defaults to the reverse order.
        #[arg(long = "perm")]
        perms: Vec<Permutation>,
        /// Give up after this many complete box sets.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Build a larger witness from smaller ones.
    Boost {
        #[command(subcommand)]
        op: BoostOp,
    },
    /// Drop one dimension, keeping every arrangement.
    Reduce { file: PathBuf },
    /// Transform all sides while keeping every arrangement.
    Transform {
        #[command(subcommand)]
        op: TransformOp,
    },
    /// Three boxes in N dimensions for the natural and reverse orders.
    GenTriple { n: usize },
    /// List the worked examples, or print one as a box file.
    Catalog { name: Option<String> },
    /// Number of inversions of an order.
    Coolness { perm: Permutation },
}

#[derive(Subcommand)]
enum BoostOp {
    /// Nest the second set around the first.
    Concat { inner: PathBuf, outer: PathBuf },
    /// Add a slightly larger copy of box X (natural position, 1-based).
    Dup { file: PathBuf, x: usize },
    /// Make the realized order the natural one.
    Inv { file: PathBuf },
}

#[derive(Subcommand)]
enum TransformOp {
    Scale {
        file: PathBuf,
        factor: Scalar,
    },
    Shift {
        file: PathBuf,
        amount: Scalar,
    },
    /// Move an isolated side within its gap.
    Replace {
        file: PathBuf,
        label: String,
        side: usize,
        value: Scalar,
    },
}

/// Failure with its exit code and message.
struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn usage(message: impl ToString) -> Failure {
    Failure(2, message.to_string())
}

fn load(path: &Path) -> Result<TrickInstance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn print_diagrams(instance: &TrickInstance) -> Result<(), Failure> {
    for (i, arr) in instance.arrangements.iter().enumerate() {
        if i > 0 {
            println!();
        }
        println!("[{}]", arr.name);
        let text = render_diagram(&instance.boxes, arr).map_err(usage)?;
        print!("{text}");
    }
    Ok(())
}

/// Prints a construction result, which must verify with its own bound flag.
fn emit_instance(instance: &TrickInstance) -> Outcome {
    let report = verify_with(instance, instance.enforce_bound);
    if let Some(v) = report.violations.first() {
        return Err(Failure(1, format!("result does not verify: {v}")));
    }
    print!("{}", render(instance));
    Ok(0)
}

fn spec(boxes: usize, dim: usize, perms: Vec<Permutation>) -> Result<PermSpec, Failure> {
    let perms = if perms.is_empty() {
        vec![Permutation::reverse(boxes)]
    } else {
        perms
    };
    PermSpec::new(boxes, dim, perms).map_err(usage)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Verify { file, no_bound } => {
            let instance = load(&file)?;
            instance.validate().map_err(usage)?;
            print_diagrams(&instance)?;
            let report = verify_with(&instance, !no_bound);
            if report.ok() {
                println!("OK");
                Ok(0)
            } else {
                for v in &report.violations {
                    println!("violation: {v}");
                }
                println!("FAIL");
                Ok(1)
            }
        }
        Command::Diagram { file } => {
            let instance = load(&file)?;
            instance.validate().map_err(usage)?;
            print_diagrams(&instance)?;
            Ok(0)
        }
        Command::Classify { a, b } => {
            let parse_dims = |text: &str| -> Result<Dims, Failure> {
                let values = text
                    .split(',')
                    .map(|v| v.trim().parse::<Scalar>().map_err(usage))
                    .collect::<Result<Vec<_>, _>>()?;
                Dims::new(values).map_err(usage)
            };
            let (a, b) = (parse_dims(&a)?, parse_dims(&b)?);
            match classify_pair(&a, &b) {
                Ok(t) => {
                    println!("{t}");
                    Ok(0)
                }
                Err(gozinta::nesting::NestingError::NotMutuallyNestable) => {
                    println!("not mutually nestable");
                    Ok(1)
                }
                Err(e) => Err(usage(e)),
            }
        }
        Command::Achieve {
            dim,
            boxes,
            perms,
            normalize,
            emit,
        } => {
            let spec = spec(boxes, dim, perms)?;
            let report = search(&spec, normalize).map_err(|e| Failure(1, e.to_string()))?;
            match report.result {
                SearchResult::Witness {
                    instance, case_index, ..
                } => {
                    let bounded =
                        restore_expansion_bound(&instance).map_err(|e| Failure(1, e.to_string()))?;
                    println!("Witness");
                    let scope = if normalize {
                        format!(
                            "{} ({} after normalization)",
                            case_count(&spec),
                            report.cases_total
                        )
                    } else {
                        report.cases_total.to_string()
                    };
                    println!(
                        "case {} of {scope}, {} systems solved",
                        case_index + 1,
                        report.systems_solved
                    );
                    print_diagrams(&instance)?;
                    if let Some(path) = emit {
                        fs::write(&path, render(&bounded))
                            .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    }
                    Ok(0)
                }
                SearchResult::ProvedInfeasible { cases_checked } => {
                    println!("ProvedInfeasible");
                    println!(
                        "{cases_checked} of {} cases, {} systems solved",
                        report.cases_total, report.systems_solved
                    );
                    Ok(1)
                }
            }
        }
        Command::Impossible { dim, boxes, perms } => {
            let spec = spec(boxes, dim, perms)?;
            let report = verify_impossibility(boxes, dim, spec.arrangements().iter().skip(1).cloned())
                .map_err(|e| Failure(1, e.to_string()))?;
            let orders: Vec<String> = report.arrangements.iter().map(|p| p.to_string()).collect();
            println!("boxes={} dim={} orders={}", boxes, dim, orders.join(","));
            println!("cases_total={}", report.cases_total);
            println!("cases_checked={}", report.cases_checked);
            println!("systems_solved={}", report.systems_solved);
            println!("all_infeasible={}", report.all_infeasible);
            if let Some(case) = &report.counterexample {
                let patterns: Vec<String> = (0..report.arrangements.len())
                    .map(|a| case.pattern(&spec, a))
                    .collect();
                println!(
                    "feasible case: expand sides {:?}, patterns {}",
                    case.expand_side,
                    patterns.join("/")
                );
                Ok(1)
            } else {
                Ok(0)
            }
        }
        Command::Brute {
            dim,
            boxes,
            max_side,
            perms,
            budget,
        } => {
            let spec = spec(boxes, dim, perms)?;
            match brute_force_search(&spec, max_side, budget) {
                Ok(Some(instance)) => {
                    print!("{}", render(&instance));
                    Ok(0)
                }
                Ok(None) => {
                    println!("none");
                    Ok(1)
                }
                Err(e @ BruteError::BudgetExceeded(_)) => Err(Failure(1, e.to_string())),
                Err(e) => Err(usage(e)),
            }
        }
        Command::Boost { op } => {
            let out = match op {
                BoostOp::Concat { inner, outer } => boost_concat(&load(&inner)?, &load(&outer)?),
                BoostOp::Dup { file, x } => boost_duplicate(&load(&file)?, x),
                BoostOp::Inv { file } => boost_inverse(&load(&file)?),
            };
            emit_instance(&out.map_err(|e| Failure(1, e.to_string()))?)
        }
        Command::Reduce { file } => {
            let out = reduce_dimension(&load(&file)?).map_err(|e| Failure(1, e.to_string()))?;
            emit_instance(&out)
        }
        Command::Transform { op } => {
            let out = match op {
                TransformOp::Scale { file, factor } => scale(&load(&file)?, &factor),
                TransformOp::Shift { file, amount } => shift(&load(&file)?, &amount),
                TransformOp::Replace {
                    file,
                    label,
                    side,
                    value,
                } => replace_gap_side(&load(&file)?, &label, side, &value),
            };
            emit_instance(&out.map_err(|e| Failure(1, e.to_string()))?)
        }
        Command::GenTriple { n } => emit_instance(&gen_triple(n).map_err(usage)?),
        Command::Catalog { name: None } => {
            for e in catalog() {
                println!("{:<16} {}", e.name, e.caption);
            }
            Ok(0)
        }
        Command::Catalog { name: Some(name) } => {
            let entry = catalog_entry(&name).ok_or_else(|| usage(format!("no catalog entry `{name}`")))?;
            print!("{}", render(&entry.instance));
            Ok(0)
        }
        Command::Coolness { perm } => {
            println!("{}", perm.inversions());
            Ok(0)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("GOZINTA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("gozinta: {message}");
            ExitCode::from(code)
        }
    }
}
