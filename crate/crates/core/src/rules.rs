//! Decision rules read off complete paths of a tree.

use std::fmt;
use std::io;

use crate::builder::{DecisionTree, NodeId, NodeLabel};
use crate::error::{Error, Result};
use crate::table::{DecisionTable, EquationSystem, SubtableRef};

/// A root-to-terminal path whose subtable is nonempty.
#[derive(Debug, Clone)]
pub struct CompletePath<'a> {
    /// Nodes from the root down to the terminal.
    pub nodes: Vec<NodeId>,
    /// Systems attached to the edges, one fewer than `nodes`.
    pub edges: Vec<EquationSystem>,
    pub subtable: SubtableRef<'a>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRule {
    pub premise: EquationSystem,
    pub decision: u32,
    pub coverage: usize,
}

impl DecisionRule {
    pub fn length(&self) -> usize {
        self.premise.len()
    }

    pub fn premise_string(&self) -> String {
        if self.premise.is_empty() {
            return "true".to_string();
        }
        let parts: Vec<String> = self.premise.iter().map(|eq| format!("({eq})")).collect();
        parts.join(" ∧ ")
    }
}

impl fmt::Display for DecisionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} → {} [len={}, cov={}]",
            self.premise_string(),
            self.decision,
            self.length(),
            self.coverage
        )
    }
}

/// Per-row best rule length and coverage, with their means over all rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleStats {
    pub row_length: Vec<usize>,
    pub row_coverage: Vec<usize>,
    pub avg_length: f64,
    pub avg_coverage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    pub rules: Vec<DecisionRule>,
    pub stats: RuleStats,
}

impl RuleSet {
    /// Writes the rules as CSV with columns premise, decision, length, coverage.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["premise", "decision", "length", "coverage"])
            .map_err(csv_err)?;
        for r in &self.rules {
            w.write_record([
                r.premise_string(),
                r.decision.to_string(),
                r.length().to_string(),
                r.coverage.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Data(e.to_string())
}

/// Union of the edge systems of a path. Equations of a hypothesis edge that
/// already appear earlier on the path are counted once.
pub fn reduce_system(edges: &[EquationSystem]) -> Result<EquationSystem> {
    let mut out = EquationSystem::new();
    for s in edges {
        out = out.union(s)?;
    }
    Ok(out)
}

/// Visits every terminal reached by a nonempty subtable, left to right.
/// Edges into nodes with no rows are never followed.
fn walk<F>(t: &DecisionTable, g: &DecisionTree, mut visit: F) -> Result<()>
where
    F: FnMut(NodeId, u32, &[u32], &[(NodeId, usize)], &EquationSystem),
{
    struct Frame {
        node: NodeId,
        rows: Vec<u32>,
        path: Vec<(NodeId, usize)>,
        premise: EquationSystem,
    }
    if g.n_attributes() != t.n_attributes() {
        return Err(Error::Data("tree and table disagree on attribute count".into()));
    }
    let mut stack = vec![Frame {
        node: g.root(),
        rows: (0..t.n_rows() as u32).collect(),
        path: Vec::new(),
        premise: EquationSystem::new(),
    }];
    while let Some(frame) = stack.pop() {
        if frame.rows.is_empty() {
            continue;
        }
        if let NodeLabel::Terminal(d) = g.label(frame.node) {
            visit(frame.node, d, &frame.rows, &frame.path, &frame.premise);
            continue;
        }
        let mut children = Vec::new();
        for (index, (child, edge)) in g.edges(frame.node).enumerate() {
            if g.path_rows(child) == 0 {
                continue;
            }
            let rows: Vec<u32> = frame
                .rows
                .iter()
                .copied()
                .filter(|&r| edge.is_satisfied_by(t.row(r as usize)))
                .collect();
            if rows.is_empty() {
                continue;
            }
            let premise = frame.premise.union(&edge.system()).map_err(|e| {
                Error::ContractViolation {
                    node: child,
                    reason: e.to_string(),
                }
            })?;
            let mut path = frame.path.clone();
            path.push((frame.node, index));
            children.push(Frame {
                node: child,
                rows,
                path,
                premise,
            });
        }
        stack.extend(children.into_iter().rev());
    }
    Ok(())
}

/// All complete paths with a nonempty subtable, in left-to-right order.
pub fn complete_paths<'a>(t: &'a DecisionTable, g: &DecisionTree) -> Result<Vec<CompletePath<'a>>> {
    let mut out = Vec::new();
    walk(t, g, |terminal, _, rows, path, _| {
        let mut nodes: Vec<NodeId> = path.iter().map(|&(n, _)| n).collect();
        nodes.push(terminal);
        let edges = path.iter().map(|&(n, i)| g.edge(n, i).system()).collect();
        out.push(CompletePath {
            nodes,
            edges,
            subtable: SubtableRef::from_sorted(t, rows.to_vec()),
        });
    })?;
    Ok(out)
}

struct Optima {
    length: Vec<Option<usize>>,
    coverage: Vec<usize>,
}

impl Optima {
    fn new(n: usize) -> Self {
        Self {
            length: vec![None; n],
            coverage: vec![0; n],
        }
    }

    fn update(&mut self, rows: &[u32], length: usize) {
        let coverage = rows.len();
        for &r in rows {
            let r = r as usize;
            self.length[r] = Some(self.length[r].map_or(length, |l| l.min(length)));
            self.coverage[r] = self.coverage[r].max(coverage);
        }
    }

    fn finish(self) -> Result<RuleStats> {
        let n = self.length.len();
        let mut row_length = Vec::with_capacity(n);
        for (r, l) in self.length.into_iter().enumerate() {
            row_length.push(l.ok_or_else(|| Error::ContractViolation {
                node: 0,
                reason: format!("row {r} is not covered by any rule"),
            })?);
        }
        let (avg_length, avg_coverage) = if n == 0 {
            (0.0, 0.0)
        } else {
            (
                row_length.iter().sum::<usize>() as f64 / n as f64,
                self.coverage.iter().sum::<usize>() as f64 / n as f64,
            )
        };
        Ok(RuleStats {
            row_length,
            row_coverage: self.coverage,
            avg_length,
            avg_coverage,
        })
    }
}

/// One rule per complete path, plus the per-row statistics.
pub fn derive_rules(t: &DecisionTable, g: &DecisionTree) -> Result<RuleSet> {
    let mut rules = Vec::new();
    let mut optima = Optima::new(t.n_rows());
    walk(t, g, |_, decision, rows, _, premise| {
        optima.update(rows, premise.len());
        rules.push(DecisionRule {
            premise: premise.clone(),
            decision,
            coverage: rows.len(),
        });
    })?;
    Ok(RuleSet {
        rules,
        stats: optima.finish()?,
    })
}

/// Same statistics as [`derive_rules`] without keeping the rules around.
pub fn rule_stats(t: &DecisionTable, g: &DecisionTree) -> Result<RuleStats> {
    let mut optima = Optima::new(t.n_rows());
    walk(t, g, |_, _, rows, _, premise| optima.update(rows, premise.len()))?;
    optima.finish()
}
