//! Experiment runs over many tables, measures and tree types.

pub mod load;
pub mod report;
pub mod synth;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::boolgen::{table_of, SuiteSpec};
use crate::builder::{build_tree_with, BuildOptions, TreeType, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::metrics::{depth, realizable_count};
use crate::rules::rule_stats;
use crate::table::DecisionTable;
use crate::uncertainty::Measure;

pub use load::{load_table, parse_table, DecisionColumn};
pub use report::{render_bool_report, render_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    /// Depth of the tree.
    H,
    /// Number of realizable nodes.
    L,
    /// Mean over rows of the shortest rule covering the row.
    RuleLength,
    /// Mean over rows of the largest coverage of a rule covering the row.
    Coverage,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::H, Metric::L, Metric::RuleLength, Metric::Coverage];

    pub fn name(self) -> &'static str {
        match self {
            Metric::H => "h",
            Metric::L => "L",
            Metric::RuleLength => "l",
            Metric::Coverage => "c",
        }
    }

    /// Integer-valued metrics.
    pub fn is_count(self) -> bool {
        matches!(self, Metric::H | Metric::L)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "h" => Ok(Metric::H),
            "L" => Ok(Metric::L),
            "l" => Ok(Metric::RuleLength),
            "c" => Ok(Metric::Coverage),
            other => Err(Error::Spec(format!("unknown metric '{other}' (expected h, L, l or c)"))),
        }
    }
}

pub fn parse_metrics(list: &str) -> Result<Vec<Metric>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Where the tables of an experiment come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableSource {
    File(PathBuf),
    Builtin(String),
    Bool(SuiteSpec),
}

impl TableSource {
    /// Name used for the dataset in reports.
    pub fn label(&self) -> String {
        match self {
            TableSource::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string()),
            TableSource::Builtin(name) => name.clone(),
            TableSource::Bool(spec) => spec.to_string(),
        }
    }
}

impl fmt::Display for TableSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableSource::File(p) => write!(f, "{}", p.display()),
            TableSource::Builtin(name) => write!(f, "builtin:{name}"),
            TableSource::Bool(spec) => write!(f, "{spec}"),
        }
    }
}

impl FromStr for TableSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with("bool:") {
            Ok(TableSource::Bool(s.parse()?))
        } else if let Some(name) = s.strip_prefix("builtin:") {
            synth::builtin_csv(name)?;
            Ok(TableSource::Builtin(name.to_string()))
        } else if s.is_empty() {
            Err(Error::Spec("empty table source".into()))
        } else {
            Ok(TableSource::File(PathBuf::from(s)))
        }
    }
}

/// Table sources from a comma-separated list, or every `.csv` file of a
/// directory in name order.
pub fn parse_sources(spec: &str) -> Result<Vec<TableSource>> {
    let path = Path::new(spec.trim());
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        return Ok(files.into_iter().map(TableSource::File).collect());
    }
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::Spec(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub datasets: Vec<TableSource>,
    pub decision: DecisionColumn,
    pub measures: Vec<Measure>,
    pub types: Vec<TreeType>,
    pub metrics: Vec<Metric>,
    pub node_budget: usize,
    /// Worker threads; results do not depend on it.
    pub workers: usize,
}

impl ExperimentSpec {
    pub fn new(datasets: Vec<TableSource>) -> Self {
        Self {
            datasets,
            decision: DecisionColumn::default(),
            measures: Measure::ALL.to_vec(),
            types: TreeType::ALL.to_vec(),
            metrics: Metric::ALL.to_vec(),
            node_budget: DEFAULT_NODE_BUDGET,
            workers: 1,
        }
    }

    pub fn check(&self) -> Result<()> {
        let empty = [
            (self.datasets.is_empty(), "datasets"),
            (self.measures.is_empty(), "measures"),
            (self.types.is_empty(), "types"),
            (self.metrics.is_empty(), "metrics"),
        ];
        if let Some((_, what)) = empty.iter().find(|(e, _)| *e) {
            return Err(Error::Spec(format!("experiment needs at least one entry in {what}")));
        }
        if self.workers == 0 {
            return Err(Error::Spec("worker count must be positive".into()));
        }
        Ok(())
    }
}

/// One reported number.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportCell {
    pub dataset: String,
    /// Position of the function within a Boolean suite.
    pub instance: Option<u32>,
    pub measure: Measure,
    pub k: TreeType,
    pub metric: Metric,
    /// Present unless the build was aborted or the table failed to load.
    pub value: Option<f64>,
    pub wall_time: Duration,
    pub nodes: usize,
    pub aborted: bool,
    pub error: Option<String>,
}

impl ReportCell {
    pub fn row_label(&self) -> String {
        match self.instance {
            Some(i) => format!("{}#{i}", self.dataset),
            None => self.dataset.clone(),
        }
    }
}

struct Instance {
    dataset: String,
    index: Option<u32>,
    table: std::result::Result<DecisionTable, String>,
}

fn load_instances(source: &TableSource, dataset: String, decision: &DecisionColumn) -> Vec<Instance> {
    let single = |table: Result<DecisionTable>| {
        vec![Instance {
            dataset: dataset.clone(),
            index: None,
            table: table.map_err(|e| e.to_string()),
        }]
    };
    match source {
        TableSource::File(path) => single(load_table(path, decision)),
        TableSource::Builtin(name) => single(synth::builtin(name)),
        TableSource::Bool(spec) => match spec.functions() {
            Ok(fs) => fs
                .iter()
                .enumerate()
                .map(|(i, f)| Instance {
                    dataset: dataset.clone(),
                    index: Some(i as u32),
                    table: Ok(table_of(f)),
                })
                .collect(),
            Err(e) => single(Err(e)),
        },
    }
}

/// Builds every (table, measure, type) combination and reports the requested
/// metrics. Output order follows the spec, whatever the worker count.
pub fn run_matrix(spec: &ExperimentSpec) -> Result<Vec<ReportCell>> {
    spec.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Spec(e.to_string()))?;
    pool.install(|| {
        let labels = unique_labels(&spec.datasets);
        let instances: Vec<Instance> = spec
            .datasets
            .par_iter()
            .zip(labels)
            .flat_map_iter(|(s, label)| load_instances(s, label, &spec.decision))
            .collect();
        let units: Vec<(&Instance, Measure, TreeType)> = instances
            .iter()
            .flat_map(|inst| {
                spec.measures
                    .iter()
                    .flat_map(move |&u| spec.types.iter().map(move |&k| (inst, u, k)))
            })
            .collect();
        let cells: Vec<Vec<ReportCell>> = units
            .par_iter()
            .map(|&(inst, u, k)| run_unit(spec, inst, u, k))
            .collect();
        Ok(cells.into_iter().flatten().collect())
    })
}

/// Source labels, with a ` (2)`, ` (3)`, ... suffix on repeats.
fn unique_labels(sources: &[TableSource]) -> Vec<String> {
    let mut seen = std::collections::HashMap::new();
    sources
        .iter()
        .map(|s| {
            let label = s.label();
            let n = seen.entry(label.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                label
            } else {
                format!("{label} ({n})")
            }
        })
        .collect()
}

fn run_unit(spec: &ExperimentSpec, inst: &Instance, u: Measure, k: TreeType) -> Vec<ReportCell> {
    let cell = |metric, value, wall_time, nodes, aborted, error: Option<String>| ReportCell {
        dataset: inst.dataset.clone(),
        instance: inst.index,
        measure: u,
        k,
        metric,
        value,
        wall_time,
        nodes,
        aborted,
        error,
    };
    let table = match &inst.table {
        Ok(t) => t,
        Err(e) => {
            return spec
                .metrics
                .iter()
                .map(|&m| cell(m, None, Duration::ZERO, 0, false, Some(e.clone())))
                .collect()
        }
    };
    let start = Instant::now();
    let options = BuildOptions {
        node_budget: spec.node_budget,
    };
    let tree = build_tree_with(table, k, u, &options);
    let wall = start.elapsed();
    let g = match tree {
        Ok(g) => g,
        Err(e) => {
            let aborted = matches!(e, Error::BudgetExceeded { .. });
            let nodes = if aborted { spec.node_budget } else { 0 };
            return spec
                .metrics
                .iter()
                .map(|&m| cell(m, None, wall, nodes, aborted, Some(e.to_string())))
                .collect();
        }
    };
    let needs_rules = spec
        .metrics
        .iter()
        .any(|m| matches!(m, Metric::RuleLength | Metric::Coverage));
    let stats = if needs_rules {
        Some(rule_stats(table, &g).map_err(|e| e.to_string()))
    } else {
        None
    };
    spec.metrics
        .iter()
        .map(|&m| {
            let value = match m {
                Metric::H => Ok(depth(&g) as f64),
                Metric::L => Ok(realizable_count(table, &g) as f64),
                Metric::RuleLength => stats.as_ref().unwrap().clone().map(|s| s.avg_length),
                Metric::Coverage => stats.as_ref().unwrap().clone().map(|s| s.avg_coverage),
            };
            match value {
                Ok(v) => cell(m, Some(v), wall, g.len(), false, None),
                Err(e) => cell(m, None, wall, g.len(), false, Some(e)),
            }
        })
        .collect()
}

/// Min, mean and max of one metric over the functions of a Boolean suite.
#[derive(Debug, Clone, PartialEq)]
pub struct BoolSummary {
    pub suite: String,
    pub measure: Measure,
    pub k: TreeType,
    pub metric: Metric,
    /// `(min, avg, max)` over the completed builds, if any.
    pub stats: Option<(f64, f64, f64)>,
    pub count: usize,
    /// Builds that were aborted or failed.
    pub missing: usize,
}

/// Groups suite cells by (suite, measure, type, metric) in order of first
/// appearance. Cells that are not part of a suite are ignored.
pub fn aggregate_bool(cells: &[ReportCell]) -> Vec<BoolSummary> {
    let mut out: Vec<BoolSummary> = Vec::new();
    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for c in cells.iter().filter(|c| c.instance.is_some()) {
        let key = (c.dataset.clone(), c.measure, c.k, c.metric);
        let slot = *index.entry(key).or_insert_with(|| {
            out.push(BoolSummary {
                suite: c.dataset.clone(),
                measure: c.measure,
                k: c.k,
                metric: c.metric,
                stats: None,
                count: 0,
                missing: 0,
            });
            values.push(Vec::new());
            out.len() - 1
        });
        out[slot].count += 1;
        match c.value {
            Some(v) => values[slot].push(v),
            None => out[slot].missing += 1,
        }
    }
    for (s, vs) in out.iter_mut().zip(values) {
        s.stats = min_avg_max(&vs);
    }
    out
}

pub fn min_avg_max(values: &[f64]) -> Option<(f64, f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let avg = values.iter().sum::<f64>() / values.len() as f64;
    Some((min, avg, max))
}
