//! Command-line front end for the partition solvers.
//!
//! Subcommands: `solve` (optimal partition of a graph file), `welfare`
//! (evaluate a given partition), `reduce` (SAT-instance to gadget-graph
//! reduction with optional threshold verification), and `bench` (timing CSV
//! for the tree solver on random trees).
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input (including
//! invalid partitions and mode-inappropriate graphs), 3 when an input exceeds
//! a solver size limit.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use maxswp::generate::random_tree;
use maxswp::oracle::solve_exact;
use maxswp::path::solve_path;
use maxswp::reduce::{build_gadget, verify_threshold, ThresholdReport, XsatInstance};
use maxswp::tree::solve_tree;
use maxswp::welfare::{avg_welfare, block_welfare, utility, welfare, Partition};
use maxswp::{Error, Graph, Rational, Tree};

#[derive(Parser)]
#[command(name = "maxswp", version, about = "Exact maximum-welfare graph partitioning")]
struct Cli {
    /// Worker threads for parallel table fills (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find an optimal partition of a graph in edge-list format.
    Solve {
        /// Graph file: "n m" header then m lines "u v"; '#' comments.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        /// Write the JSON result here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the welfare of a partition given as JSON {"blocks": [[..]]}.
    Welfare {
        input: PathBuf,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the 4-regular gadget graph of an exact-1-in-3 SAT instance.
    Reduce {
        /// Instance file: "p xsat n m" then m lines of three 1-based ids.
        input: PathBuf,
        /// Solve the gadget exactly (only up to 20 vertices) and compare the
        /// optimum against the 41n/12 threshold.
        #[arg(long)]
        verify: bool,
        /// Comma-separated truth values (1/0) to certify in forward mode.
        #[arg(long)]
        assignment: Option<String>,
        /// Prefix for the emitted <prefix>.edges and <prefix>.labels.json.
        #[arg(long, default_value = "gadget")]
        output: String,
    },
    /// Time the tree solver on random trees and emit CSV rows "n,runtime_ms".
    Bench {
        /// Comma-separated tree sizes; empty string for an empty report.
        #[arg(long, default_value = "10000,100000,1000000")]
        sizes: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Auto,
    Path,
    Tree,
    Exact,
}

struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail<T>(message: impl Into<String>) -> CliResult<T> {
    Err(Failure {
        code: 2,
        message: message.into(),
    })
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn emit(text: String, output: Option<&PathBuf>) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: 2,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let result = match cli.command {
        Command::Solve {
            input,
            mode,
            output,
        } => cmd_solve(&input, mode, output.as_ref()),
        Command::Welfare {
            input,
            partition,
            output,
        } => cmd_welfare(&input, &partition, output.as_ref()),
        Command::Reduce {
            input,
            verify,
            assignment,
            output,
        } => cmd_reduce(&input, verify, assignment.as_deref(), &output),
        Command::Bench {
            sizes,
            seed,
            output,
        } => cmd_bench(&sizes, seed, output.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_solve(input: &PathBuf, mode: Mode, output: Option<&PathBuf>) -> CliResult<()> {
    let graph = Graph::parse_edge_list(&read_file(input)?)?;
    let started = Instant::now();
    let (mode_name, partition, value) = match mode {
        Mode::Path => solve_as_path(&graph)?,
        Mode::Tree => solve_as_tree(graph.clone())?,
        Mode::Exact => solve_as_exact(&graph)?,
        Mode::Auto => {
            if graph.path_order().is_some() {
                solve_as_path(&graph)?
            } else if graph.is_tree() {
                solve_as_tree(graph.clone())?
            } else {
                solve_as_exact(&graph)?
            }
        }
    };
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = json!({
        "n": graph.n(),
        "mode": mode_name,
        "welfare": value,
        "blocks": partition.blocks(),
        "runtime_ms": runtime_ms,
    });
    emit(serde_json::to_string_pretty(&report).unwrap(), output)
}

fn solve_as_path(graph: &Graph) -> CliResult<(&'static str, Partition, Rational)> {
    let Some(order) = graph.path_order() else {
        return fail("graph is not a path; use --mode tree or exact");
    };
    let (positions, value) = solve_path(graph.n())?;
    let blocks = positions
        .blocks()
        .iter()
        .map(|b| b.iter().map(|pos| order[pos as usize]).collect())
        .collect();
    Ok(("path", Partition::new(blocks), value))
}

fn solve_as_tree(graph: Graph) -> CliResult<(&'static str, Partition, Rational)> {
    let tree = Tree::new(graph)?;
    let (partition, value) = solve_tree(&tree);
    Ok(("tree", partition, value))
}

fn solve_as_exact(graph: &Graph) -> CliResult<(&'static str, Partition, Rational)> {
    let (partition, value) = solve_exact(graph)?;
    Ok(("exact", partition, value))
}

fn cmd_welfare(input: &PathBuf, partition: &PathBuf, output: Option<&PathBuf>) -> CliResult<()> {
    let graph = Graph::parse_edge_list(&read_file(input)?)?;
    let partition: Partition = serde_json::from_str(&read_file(partition)?)
        .map_err(|e| Failure {
            code: 2,
            message: format!("invalid partition JSON: {e}"),
        })?;
    let total = welfare(&graph, &partition)?;
    let average = avg_welfare(&graph, &partition)?;
    let blocks: Vec<_> = partition
        .blocks()
        .iter()
        .map(|c| {
            json!({
                "vertices": c,
                "welfare": block_welfare(&graph, c),
            })
        })
        .collect();
    let mut utilities = vec![Rational::ZERO; graph.n()];
    for block in partition.blocks() {
        for v in block.iter() {
            utilities[v as usize] = utility(&graph, v, block)?;
        }
    }
    let report = json!({
        "n": graph.n(),
        "total": total,
        "average": average,
        "blocks": blocks,
        "utilities": utilities,
    });
    emit(serde_json::to_string_pretty(&report).unwrap(), output)
}

fn parse_assignment(text: &str) -> CliResult<Vec<bool>> {
    text.split(',')
        .map(|tok| match tok.trim() {
            "1" | "true" => Ok(true),
            "0" | "false" => Ok(false),
            other => fail(format!("invalid assignment value '{other}'")),
        })
        .collect()
}

fn cmd_reduce(
    input: &PathBuf,
    verify: bool,
    assignment: Option<&str>,
    output: &str,
) -> CliResult<()> {
    let instance = XsatInstance::parse(&read_file(input)?)?;
    let gadget = build_gadget(&instance);
    let assignment = assignment.map(parse_assignment).transpose()?;

    let edges_path = format!("{output}.edges");
    let labels_path = format!("{output}.labels.json");
    fs::write(&edges_path, gadget.graph().to_edge_list()).map_err(|e| Failure {
        code: 2,
        message: format!("cannot write {edges_path}: {e}"),
    })?;
    fs::write(
        &labels_path,
        serde_json::to_string_pretty(gadget.labels()).unwrap(),
    )
    .map_err(|e| Failure {
        code: 2,
        message: format!("cannot write {labels_path}: {e}"),
    })?;

    let verification = if verify {
        match verify_threshold(&gadget, &instance, assignment.as_deref())? {
            ThresholdReport::Exact {
                threshold,
                optimum,
                satisfiable,
                partition,
            } => json!({
                "mode": "exact",
                "threshold": threshold,
                "optimum": optimum,
                "optimum_equals_threshold": satisfiable,
                "blocks": partition.blocks(),
            }),
            ThresholdReport::Forward {
                threshold,
                certified,
            } => json!({
                "mode": "forward-only",
                "threshold": threshold,
                "assignment_certified": certified.map(|value| value == threshold),
            }),
        }
    } else {
        serde_json::Value::Null
    };
    let report = json!({
        "n_vars": gadget.n_vars(),
        "vertices": gadget.graph().n(),
        "edges": gadget.graph().m(),
        "files": { "edges": edges_path, "labels": labels_path },
        "verification": verification,
    });
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn cmd_bench(sizes: &str, seed: u64, output: Option<&PathBuf>) -> CliResult<()> {
    let mut parsed = Vec::new();
    for tok in sizes.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.parse::<usize>() {
            Ok(n) if n >= 1 => parsed.push(n),
            _ => return fail(format!("invalid size '{tok}'")),
        }
    }
    let sizes = parsed;

    let mut csv = String::from("n,runtime_ms\n");
    let mut timings: Vec<(usize, f64)> = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let tree = random_tree(n, seed.wrapping_add(i as u64));
        let started = Instant::now();
        let (_, value) = solve_tree(&tree);
        let ms = started.elapsed().as_secs_f64() * 1e3;
        debug_assert!(value >= Rational::ZERO);
        csv.push_str(&format!("{n},{ms:.3}\n"));
        timings.push((n, ms));
    }
    // Scaling summary on stderr so stdout stays clean CSV.
    for pair in timings.windows(2) {
        let ((n1, t1), (n2, t2)) = (pair[0], pair[1]);
        if n2 == 10 * n1 && t1 > 0.0 {
            let ratio = t2 / t1;
            eprintln!(
                "runtime({n2}) / runtime({n1}) = {ratio:.2} -> near-linear: {}",
                ratio <= 15.0
            );
        }
    }
    emit(csv.trim_end().to_string(), output)
}
