//! Tree depth, realizable nodes, simulation and validation.

use std::fmt;

use crate::builder::{DecisionTree, Edge, NodeId, NodeLabel};
use crate::error::{Error, Result};
use crate::queries::{Answer, Hypothesis};
use crate::table::{DecisionTable, Equation, EquationSystem};

/// Maximum number of working nodes on a root-to-terminal path.
pub fn depth(g: &DecisionTree) -> usize {
    let mut depth = vec![0usize; g.len()];
    let mut max = 0;
    for id in 0..g.len() {
        if g.is_terminal(id) {
            max = max.max(depth[id]);
            continue;
        }
        for child in g.children(id) {
            depth[child] = depth[id] + 1;
        }
    }
    max
}

/// Number of nodes whose path subtable is nonempty. These are exactly the
/// nodes some row reaches under some truthful choice of counterexamples.
pub fn realizable_count(t: &DecisionTable, g: &DecisionTree) -> usize {
    debug_assert_eq!(g.path_rows(g.root()), t.n_rows());
    (0..g.len()).filter(|&id| g.path_rows(id) > 0).count()
}

/// Where a computation currently is and what it has learned so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationState {
    pub node: NodeId,
    pub system: EquationSystem,
}

/// Answers the lowest-index counterexample; confirms when the row matches.
pub fn first_counterexample(_node: NodeId, hypothesis: &[u32], row: &[u32]) -> Answer {
    match hypothesis.iter().zip(row).position(|(h, r)| h != r) {
        Some(attr) => Answer::Equation(Equation::new(attr, row[attr])),
        None => Answer::Confirm(Hypothesis::from_values_unchecked(hypothesis.to_vec())),
    }
}

/// Runs the tree on row `row` of `t`, asking `strategy` to answer each
/// hypothesis query. Fails if the strategy gives an untruthful answer.
pub fn simulate<S>(t: &DecisionTable, g: &DecisionTree, row: usize, strategy: S) -> Result<u32>
where
    S: FnMut(NodeId, &[u32], &[u32]) -> Answer,
{
    let state = simulate_state(t, g, row, strategy)?;
    match g.label(state.node) {
        NodeLabel::Terminal(d) => Ok(d),
        _ => unreachable!("simulation ends at a terminal"),
    }
}

/// Like [`simulate`] but returns the final node and accumulated system.
pub fn simulate_state<S>(
    t: &DecisionTable,
    g: &DecisionTree,
    row: usize,
    mut strategy: S,
) -> Result<ComputationState>
where
    S: FnMut(NodeId, &[u32], &[u32]) -> Answer,
{
    if row >= t.n_rows() {
        return Err(Error::Data(format!("row {row} out of range")));
    }
    let values = t.row(row);
    let mut node = g.root();
    let mut system = EquationSystem::new();
    loop {
        let chosen = match g.label(node) {
            NodeLabel::Terminal(_) => return Ok(ComputationState { node, system }),
            NodeLabel::Attribute(attr) => {
                let value = values[attr];
                g.edges(node)
                    .find(|(_, e)| *e == Edge::Value(Equation::new(attr, value)))
                    .ok_or_else(|| violation(node, format!("no edge for f{}={value}", attr + 1)))?
            }
            NodeLabel::Hypothesis(h) => {
                let answer = strategy(node, h, values);
                check_truthful(node, h, values, &answer)?;
                let wanted = match &answer {
                    Answer::Confirm(_) => Edge::Confirm(h),
                    Answer::Equation(eq) => Edge::Value(*eq),
                };
                g.edges(node)
                    .find(|(_, e)| *e == wanted)
                    .ok_or_else(|| violation(node, format!("no edge for answer {answer}")))?
            }
        };
        system = system
            .union(&chosen.1.system())
            .map_err(|e| violation(node, e.to_string()))?;
        node = chosen.0;
    }
}

fn violation(node: NodeId, reason: String) -> Error {
    Error::ContractViolation { node, reason }
}

fn check_truthful(node: NodeId, h: &[u32], row: &[u32], answer: &Answer) -> Result<()> {
    match answer {
        Answer::Confirm(given) => {
            if given.values() != h {
                Err(violation(node, "confirmed a different hypothesis".into()))
            } else if row != h {
                Err(violation(node, "confirmed a hypothesis the row does not satisfy".into()))
            } else {
                Ok(())
            }
        }
        Answer::Equation(eq) => {
            if eq.attr >= row.len() {
                Err(violation(node, format!("counterexample attribute f{} out of range", eq.attr + 1)))
            } else if row[eq.attr] != eq.value {
                Err(violation(node, format!("counterexample {eq} is false for the row")))
            } else if h[eq.attr] == eq.value {
                Err(violation(node, format!("{eq} agrees with the hypothesis")))
            } else {
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Per-row cap on enumerated counterexample strategies; rows above it
    /// are only checked structurally.
    pub strategy_bound: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            strategy_bound: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ShapeMismatch { detail: String },
    RowCountMismatch { node: NodeId, stored: usize, actual: usize },
    NondegenerateTerminal { node: NodeId },
    WrongDecision { node: NodeId, expected: u32, found: u32 },
    EmptyTerminalNotZero { node: NodeId, found: u32 },
    WrongOutcome { row: usize, node: NodeId, found: u32, expected: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ShapeMismatch { detail } => write!(f, "shape: {detail}"),
            Violation::RowCountMismatch { node, stored, actual } => {
                write!(f, "node {node}: stored row count {stored}, actual {actual}")
            }
            Violation::NondegenerateTerminal { node } => {
                write!(f, "node {node}: terminal over a nondegenerate subtable")
            }
            Violation::WrongDecision { node, expected, found } => {
                write!(f, "node {node}: terminal decision {found}, subtable decision {expected}")
            }
            Violation::EmptyTerminalNotZero { node, found } => {
                write!(f, "node {node}: empty-subtable terminal labelled {found}, expected 0")
            }
            Violation::WrongOutcome { row, node, found, expected } => write!(
                f,
                "row {row}: reaches node {node} with decision {found}, expected {expected}"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Rows whose every counterexample strategy was simulated.
    pub rows_exhaustive: usize,
    /// Rows skipped because their strategy count exceeded the bound.
    pub rows_over_bound: usize,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        writeln!(
            f,
            "violations={} rows_exhaustive={} rows_over_bound={}",
            self.violations.len(),
            self.rows_exhaustive,
            self.rows_over_bound
        )
    }
}

/// Checks that `g` is a correct decision tree for `t`.
///
/// Terminal labels are checked against the recomputed path subtables, and
/// every row is run under every truthful counterexample strategy when the
/// number of strategies for that row is within the bound.
pub fn validate(t: &DecisionTable, g: &DecisionTree, options: &ValidateOptions) -> ValidationReport {
    let mut report = ValidationReport::default();
    if g.n_attributes() != t.n_attributes() {
        report.violations.push(Violation::ShapeMismatch {
            detail: format!(
                "tree has {} attributes, table has {}",
                g.n_attributes(),
                t.n_attributes()
            ),
        });
        return report;
    }

    let mut stack: Vec<(NodeId, Vec<u32>)> = vec![(g.root(), (0..t.n_rows() as u32).collect())];
    while let Some((node, rows)) = stack.pop() {
        if g.path_rows(node) != rows.len() {
            report.violations.push(Violation::RowCountMismatch {
                node,
                stored: g.path_rows(node),
                actual: rows.len(),
            });
        }
        match g.label(node) {
            NodeLabel::Terminal(d) => match rows.first() {
                None if d != 0 => report
                    .violations
                    .push(Violation::EmptyTerminalNotZero { node, found: d }),
                None => {}
                Some(&first) => {
                    let expected = t.decision(first as usize);
                    if rows.iter().any(|&r| t.decision(r as usize) != expected) {
                        report.violations.push(Violation::NondegenerateTerminal { node });
                    } else if d != expected {
                        report.violations.push(Violation::WrongDecision {
                            node,
                            expected,
                            found: d,
                        });
                    }
                }
            },
            _ => {
                for (child, edge) in g.edges(node) {
                    let sub = rows
                        .iter()
                        .copied()
                        .filter(|&r| edge.is_satisfied_by(t.row(r as usize)))
                        .collect();
                    stack.push((child, sub));
                }
            }
        }
    }

    for row in 0..t.n_rows() {
        let mut walker = StrategyWalker {
            t,
            g,
            row,
            budget: options.strategy_bound,
            paths: 0,
            over: false,
            wrong: Vec::new(),
        };
        walker.walk(g.root());
        if walker.over {
            report.rows_over_bound += 1;
        } else {
            report.rows_exhaustive += 1;
            report.violations.extend(walker.wrong);
        }
    }
    report
}

struct StrategyWalker<'a> {
    t: &'a DecisionTable,
    g: &'a DecisionTree,
    row: usize,
    budget: u64,
    paths: u64,
    over: bool,
    wrong: Vec<Violation>,
}

impl StrategyWalker<'_> {
    fn walk(&mut self, node: NodeId) {
        if self.over {
            return;
        }
        let values = self.t.row(self.row);
        match self.g.label(node) {
            NodeLabel::Terminal(found) => {
                self.paths += 1;
                if self.paths > self.budget {
                    self.over = true;
                    return;
                }
                let expected = self.t.decision(self.row);
                if found != expected {
                    self.wrong.push(Violation::WrongOutcome {
                        row: self.row,
                        node,
                        found,
                        expected,
                    });
                }
            }
            NodeLabel::Attribute(_) => {
                let next = self
                    .g
                    .edges(node)
                    .find(|(_, e)| e.is_satisfied_by(values))
                    .map(|(c, _)| c);
                match next {
                    Some(child) => self.walk(child),
                    None => self.wrong.push(Violation::ShapeMismatch {
                        detail: format!("row {} has no edge at node {node}", self.row),
                    }),
                }
            }
            NodeLabel::Hypothesis(h) => {
                if values == h {
                    self.walk(node_child(self.g, node, 0));
                    return;
                }
                let next: Vec<NodeId> = self
                    .g
                    .edges(node)
                    .skip(1)
                    .filter(|(_, e)| e.is_satisfied_by(values))
                    .map(|(c, _)| c)
                    .collect();
                for child in next {
                    self.walk(child);
                }
            }
        }
    }
}

fn node_child(g: &DecisionTree, node: NodeId, index: usize) -> NodeId {
    g.children(node).start + index
}
