use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hyptree::builder::{parse_types, DEFAULT_NODE_BUDGET};
use hyptree::harness::{
    aggregate_bool, load_table, parse_metrics, parse_sources, render_bool_report, render_report,
    run_matrix, synth, DecisionColumn, ExperimentSpec, Format, Metric, TableSource,
};
use hyptree::metrics::{depth, realizable_count, validate, ValidateOptions};
use hyptree::rules::{derive_rules, rule_stats};
use hyptree::uncertainty::parse_measures;
use hyptree::{build_tree_with, BuildOptions, DecisionTable, Error, Measure, TreeType};

#[derive(Parser)]
#[command(name = "hyptree", version, about = "Greedy decision trees with hypothesis queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tree and print it, one node per line
    Build {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print depth, realizable nodes and rule statistics of a tree
    Metrics {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long, default_value = "h,L,l,c")]
        show: String,
    },
    /// Print the decision rules read off a tree
    Rules {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run every combination of tables, measures and types
    Experiment {
        /// Directory of .csv files, or a comma-separated list of sources
        #[arg(long)]
        tables: String,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, default_value = "h,L,l,c")]
        metrics: String,
        #[arg(long, default_value = "decision")]
        decision: String,
    },
    /// Run the matrix over suites of random Boolean functions
    ExperimentBool {
        /// Variable counts, e.g. 3-6 or 4,5
        #[arg(long, default_value = "3-6")]
        n: String,
        #[arg(long, default_value_t = 100)]
        count: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long, default_value = "h")]
        metrics: String,
    },
    /// Check a built tree against its table
    Validate {
        #[command(flatten)]
        tree: TreeArgs,
        /// Per-row cap on simulated counterexample strategies
        #[arg(long, default_value_t = 1_000_000)]
        strategy_bound: u64,
    },
}

#[derive(Args)]
struct TreeArgs {
    /// CSV file, or builtin:balance-scale / builtin:tic-tac-toe
    #[arg(long)]
    table: String,
    #[arg(long = "type", value_name = "K")]
    k: String,
    #[arg(long, value_name = "M")]
    measure: String,
    /// Decision column name, or "last"
    #[arg(long, default_value = "decision")]
    decision: String,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: usize,
}

#[derive(Args)]
struct MatrixArgs {
    #[arg(long, default_value = "me,rme,ent,gini,r")]
    measures: String,
    #[arg(long, default_value = "1-5")]
    types: String,
    #[arg(long, default_value = "markdown")]
    format: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Spec(_) | Error::UnknownMeasure(_) | Error::TreeType(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load(source: &str, decision: &str) -> Result<DecisionTable, Error> {
    match source.parse::<TableSource>()? {
        TableSource::File(path) => load_table(&path, &DecisionColumn::parse(decision)),
        TableSource::Builtin(name) => synth::builtin(&name),
        TableSource::Bool(_) => Err(Error::Spec(
            "Boolean suites hold many tables; use experiment-bool".into(),
        )),
    }
}

struct Built {
    table: DecisionTable,
    tree: hyptree::DecisionTree,
}

fn build(args: &TreeArgs) -> Result<Built, Error> {
    let k: TreeType = args.k.parse()?;
    let u: Measure = args.measure.parse()?;
    let table = load(&args.table, &args.decision)?;
    let options = BuildOptions {
        node_budget: args.node_budget,
    };
    let tree = build_tree_with(&table, k, u, &options)?;
    Ok(Built { table, tree })
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Build { tree, out } => {
            let b = build(&tree)?;
            write_output(out.as_ref(), &b.tree.serialize())?;
        }
        Command::Metrics { tree, show } => {
            let metrics = parse_metrics(&show)?;
            let b = build(&tree)?;
            let needs_rules = metrics
                .iter()
                .any(|m| matches!(m, Metric::RuleLength | Metric::Coverage));
            let stats = if needs_rules {
                Some(rule_stats(&b.table, &b.tree)?)
            } else {
                None
            };
            for m in metrics {
                match m {
                    Metric::H => println!("h={}", depth(&b.tree)),
                    Metric::L => println!("L={}", realizable_count(&b.table, &b.tree)),
                    Metric::RuleLength => println!("l={:.2}", stats.as_ref().unwrap().avg_length),
                    Metric::Coverage => println!("c={:.2}", stats.as_ref().unwrap().avg_coverage),
                }
            }
        }
        Command::Rules { tree, csv } => {
            let b = build(&tree)?;
            let set = derive_rules(&b.table, &b.tree)?;
            for r in &set.rules {
                println!("{r}");
            }
            println!(
                "rules={} l={:.2} c={:.2}",
                set.rules.len(),
                set.stats.avg_length,
                set.stats.avg_coverage
            );
            if let Some(path) = csv {
                set.write_csv(fs::File::create(path)?)?;
            }
        }
        Command::Experiment {
            tables,
            matrix,
            metrics,
            decision,
        } => {
            let mut spec = ExperimentSpec::new(parse_sources(&tables)?);
            spec.decision = DecisionColumn::parse(&decision);
            spec.metrics = parse_metrics(&metrics)?;
            let format = matrix.apply(&mut spec)?;
            let cells = run_matrix(&spec)?;
            write_output(matrix.out.as_ref(), &render_report(&cells, format))?;
        }
        Command::ExperimentBool {
            n,
            count,
            seed,
            matrix,
            metrics,
        } => {
            let sources = parse_numbers(&n)?
                .into_iter()
                .map(|n| format!("bool:n={n},count={count},seed={seed}").parse())
                .collect::<Result<Vec<TableSource>, Error>>()?;
            let mut spec = ExperimentSpec::new(sources);
            spec.metrics = parse_metrics(&metrics)?;
            let format = matrix.apply(&mut spec)?;
            let cells = run_matrix(&spec)?;
            let summaries = aggregate_bool(&cells);
            write_output(matrix.out.as_ref(), &render_bool_report(&summaries, format))?;
        }
        Command::Validate {
            tree,
            strategy_bound,
        } => {
            let b = build(&tree)?;
            let report = validate(&b.table, &b.tree, &ValidateOptions { strategy_bound });
            print!("{report}");
            if !report.is_ok() {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

impl MatrixArgs {
    fn apply(&self, spec: &mut ExperimentSpec) -> Result<Format, Error> {
        spec.measures = parse_measures(&self.measures)?;
        spec.types = parse_types(&self.types)?;
        spec.workers = self.workers;
        spec.node_budget = self.node_budget;
        self.format.parse()
    }
}

/// `3-6`, `4,5` or a mix.
fn parse_numbers(spec: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::Spec(format!("invalid number list '{spec}'"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: usize = lo.trim().parse().map_err(|_| bad())?;
                let hi: usize = hi.trim().parse().map_err(|_| bad())?;
                if lo > hi {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}
