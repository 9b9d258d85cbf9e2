//! Text reports: one block per (metric, measure), one row per dataset and
//! one column per tree type, followed by an Average row.

use std::fmt::Write;

use super::{BoolSummary, Format, Metric, ReportCell};
use crate::builder::TreeType;
use crate::uncertainty::Measure;

const MISSING: &str = "—";

fn first_appearance<T: PartialEq + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn format_value(metric: Metric, v: f64) -> String {
    if metric.is_count() && v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn format_average(metric: Metric, v: f64) -> String {
    if metric.is_count() {
        format!("{v:.1}")
    } else {
        format!("{v:.2}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct Block<'c> {
    metric: Metric,
    measure: Measure,
    rows: Vec<(String, Vec<Option<&'c ReportCell>>)>,
}

fn blocks<'c>(cells: &'c [ReportCell], types: &[TreeType]) -> Vec<Block<'c>> {
    let keys = first_appearance(cells.iter().map(|c| (c.metric, c.measure)));
    keys.into_iter()
        .map(|(metric, measure)| {
            let mine: Vec<&ReportCell> = cells
                .iter()
                .filter(|c| c.metric == metric && c.measure == measure)
                .collect();
            let labels = first_appearance(mine.iter().map(|c| c.row_label()));
            let rows = labels
                .into_iter()
                .map(|label| {
                    let row = types
                        .iter()
                        .map(|&k| {
                            mine.iter()
                                .find(|c| c.k == k && c.row_label() == label)
                                .copied()
                        })
                        .collect();
                    (label, row)
                })
                .collect();
            Block {
                metric,
                measure,
                rows,
            }
        })
        .collect()
}

fn render_cell(metric: Metric, cell: Option<&ReportCell>) -> String {
    match cell {
        None => String::new(),
        Some(c) => c.value.map_or_else(|| MISSING.to_string(), |v| format_value(metric, v)),
    }
}

fn column_average(block: &Block<'_>, col: usize) -> String {
    let mut sum = 0.0;
    for (_, row) in &block.rows {
        match row[col].and_then(|c| c.value) {
            Some(v) => sum += v,
            None => return MISSING.to_string(),
        }
    }
    format_average(block.metric, sum / block.rows.len() as f64)
}

/// Renders cells in the wide layout. Cells without a value are shown as "—"
/// and explained in notes below the block (markdown only).
pub fn render_report(cells: &[ReportCell], format: Format) -> String {
    let types = first_appearance(cells.iter().map(|c| c.k));
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("metric,measure,dataset");
            for k in &types {
                write!(out, ",{k}").unwrap();
            }
            out.push('\n');
            for b in blocks(cells, &types) {
                for (label, row) in &b.rows {
                    write!(out, "{},{},{}", b.metric, b.measure, csv_field(label)).unwrap();
                    for c in row {
                        write!(out, ",{}", render_cell(b.metric, *c)).unwrap();
                    }
                    out.push('\n');
                }
                write!(out, "{},{},Average", b.metric, b.measure).unwrap();
                for col in 0..types.len() {
                    write!(out, ",{}", column_average(&b, col)).unwrap();
                }
                out.push('\n');
            }
        }
        Format::Markdown => {
            if cells.is_empty() {
                out.push_str("| dataset |\n| --- |\n");
                return out;
            }
            for (i, b) in blocks(cells, &types).iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                writeln!(out, "### {}, {}\n", b.metric, b.measure).unwrap();
                out.push_str("| dataset |");
                for k in &types {
                    write!(out, " {k} |").unwrap();
                }
                out.push_str("\n| --- |");
                for _ in &types {
                    out.push_str(" ---: |");
                }
                out.push('\n');
                let mut notes = Vec::new();
                for (label, row) in &b.rows {
                    write!(out, "| {label} |").unwrap();
                    for c in row {
                        write!(out, " {} |", render_cell(b.metric, *c)).unwrap();
                        if let Some(c) = c.filter(|c| c.value.is_none()) {
                            let why = if c.aborted {
                                format!("build aborted after {} nodes (node budget)", c.nodes)
                            } else {
                                c.error.clone().unwrap_or_else(|| "no value".into())
                            };
                            notes.push(format!("{label}, type {}: {why}", c.k));
                        }
                    }
                    out.push('\n');
                }
                out.push_str("| Average |");
                for col in 0..types.len() {
                    write!(out, " {} |", column_average(b, col)).unwrap();
                }
                out.push('\n');
                if !notes.is_empty() {
                    out.push('\n');
                    for n in notes {
                        writeln!(out, "{MISSING} {n}").unwrap();
                    }
                }
            }
        }
    }
    out
}

fn format_triple(metric: Metric, s: Option<(f64, f64, f64)>) -> String {
    match s {
        Some((min, avg, max)) => format!(
            "{} {avg:.2} {}",
            format_value(metric, min),
            format_value(metric, max)
        ),
        None => MISSING.to_string(),
    }
}

/// Renders suite summaries as "min avg max" per type (markdown), or one
/// record per summary (CSV).
pub fn render_bool_report(summaries: &[BoolSummary], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("metric,measure,suite,type,min,avg,max,count,missing\n");
            for s in summaries {
                let (min, avg, max) = match s.stats {
                    Some((a, b, c)) => (
                        format_value(s.metric, a),
                        format!("{b:.2}"),
                        format_value(s.metric, c),
                    ),
                    None => Default::default(),
                };
                writeln!(
                    out,
                    "{},{},{},{},{min},{avg},{max},{},{}",
                    s.metric,
                    s.measure,
                    csv_field(&s.suite),
                    s.k,
                    s.count,
                    s.missing
                )
                .unwrap();
            }
        }
        Format::Markdown => {
            let types = first_appearance(summaries.iter().map(|s| s.k));
            let keys = first_appearance(summaries.iter().map(|s| (s.metric, s.measure)));
            for (i, (metric, measure)) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                writeln!(out, "### {metric}, {measure} (min avg max)\n").unwrap();
                out.push_str("| suite |");
                for k in &types {
                    write!(out, " {k} |").unwrap();
                }
                out.push_str("\n| --- |");
                for _ in &types {
                    out.push_str(" ---: |");
                }
                out.push('\n');
                let mine: Vec<&BoolSummary> = summaries
                    .iter()
                    .filter(|s| s.metric == metric && s.measure == measure)
                    .collect();
                for suite in first_appearance(mine.iter().map(|s| s.suite.clone())) {
                    write!(out, "| {suite} |").unwrap();
                    for &k in &types {
                        let cell = mine
                            .iter()
                            .find(|s| s.k == k && s.suite == suite)
                            .map(|s| format_triple(metric, s.stats))
                            .unwrap_or_default();
                        write!(out, " {cell} |").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}
