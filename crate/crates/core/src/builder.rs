//! Greedy construction of decision trees of types 1 to 5.
//!
//! Trees live in a flat arena. Children of a node are allocated together
//! when the node is expanded, so they occupy a contiguous id range and
//! always have larger ids than their parent.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::queries::{write_hypothesis, BranchProfile, Hypothesis, Query};
use crate::table::{DecisionTable, Equation, EquationSystem, SubtableRef};
use crate::uncertainty::Measure;

pub type NodeId = usize;

/// Default node budget per build.
pub const DEFAULT_NODE_BUDGET: usize = 20_000_000;

/// Which queries a tree may use.
///
/// 1: attributes; 2: hypotheses; 3: attributes and hypotheses;
/// 4: proper hypotheses; 5: attributes and proper hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeType(u8);

impl TreeType {
    pub const ALL: [TreeType; 5] = [TreeType(1), TreeType(2), TreeType(3), TreeType(4), TreeType(5)];

    pub fn new(k: u8) -> Result<Self> {
        if (1..=5).contains(&k) {
            Ok(Self(k))
        } else {
            Err(Error::TreeType(k))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn uses_attributes(self) -> bool {
        matches!(self.0, 1 | 3 | 5)
    }

    pub fn uses_hypotheses(self) -> bool {
        self.0 != 1
    }

    pub fn proper_only(self) -> bool {
        matches!(self.0, 4 | 5)
    }
}

impl fmt::Display for TreeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for TreeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::Spec(format!("invalid tree type {s:?}")))?;
        TreeType::new(k)
    }
}

/// Parses `1-5`, `2,4` or a mix such as `1,3-5`.
pub fn parse_types(spec: &str) -> Result<Vec<TreeType>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((lo, hi)) => {
                let lo: TreeType = lo.parse()?;
                let hi: TreeType = hi.parse()?;
                for k in lo.get()..=hi.get() {
                    out.push(TreeType(k));
                }
            }
            None => out.push(part.parse()?),
        }
    }
    if out.is_empty() {
        return Err(Error::Spec("no tree types given".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Pending,
    Terminal(u32),
    Attribute(u32),
    // offset into the hypothesis pool
    Hypothesis(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Node {
    label: Label,
    first_child: u32,
    child_count: u32,
    rows: u32,
}

/// What a node is labelled with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLabel<'t> {
    Terminal(u32),
    Attribute(usize),
    Hypothesis(&'t [u32]),
}

/// The answer attached to an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge<'t> {
    /// A single equation: an attribute value or a counterexample.
    Value(Equation),
    /// The hypothesis was confirmed.
    Confirm(&'t [u32]),
}

impl Edge<'_> {
    pub fn system(&self) -> EquationSystem {
        match *self {
            Edge::Value(eq) => EquationSystem::singleton(eq.attr, eq.value),
            Edge::Confirm(values) => EquationSystem::from_assignment(values),
        }
    }

    pub fn is_satisfied_by(&self, row: &[u32]) -> bool {
        match *self {
            Edge::Value(eq) => row[eq.attr] == eq.value,
            Edge::Confirm(values) => row == values,
        }
    }
}

impl fmt::Display for Edge<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Value(eq) => eq.fmt(f),
            Edge::Confirm(values) => write_hypothesis(f, values),
        }
    }
}

/// A decision tree over attributes and hypotheses, stored as an arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionTree {
    n_attributes: usize,
    value_sets: Vec<Vec<u32>>,
    nodes: Vec<Node>,
    hypotheses: Vec<u32>,
}

impl DecisionTree {
    pub fn root(&self) -> NodeId {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_attributes(&self) -> usize {
        self.n_attributes
    }

    pub fn label(&self, id: NodeId) -> NodeLabel<'_> {
        match self.nodes[id].label {
            Label::Terminal(d) => NodeLabel::Terminal(d),
            Label::Attribute(a) => NodeLabel::Attribute(a as usize),
            Label::Hypothesis(off) => NodeLabel::Hypothesis(self.hypothesis_values(off)),
            Label::Pending => unreachable!("finished trees have no pending nodes"),
        }
    }

    pub fn is_terminal(&self, id: NodeId) -> bool {
        matches!(self.nodes[id].label, Label::Terminal(_))
    }

    /// The query of a working node.
    pub fn query(&self, id: NodeId) -> Option<Query> {
        match self.label(id) {
            NodeLabel::Terminal(_) => None,
            NodeLabel::Attribute(a) => Some(Query::Attribute(a)),
            NodeLabel::Hypothesis(v) => Some(Query::Hypothesis(Hypothesis::from_values_unchecked(
                v.to_vec(),
            ))),
        }
    }

    pub fn children(&self, id: NodeId) -> Range<NodeId> {
        let node = &self.nodes[id];
        let start = node.first_child as usize;
        start..start + node.child_count as usize
    }

    /// Row count of the subtable reached at this node.
    pub fn path_rows(&self, id: NodeId) -> usize {
        self.nodes[id].rows as usize
    }

    /// Answer on the edge from `parent` to its `index`-th child.
    pub fn edge(&self, parent: NodeId, index: usize) -> Edge<'_> {
        match self.label(parent) {
            NodeLabel::Terminal(_) => panic!("terminal node {parent} has no edges"),
            NodeLabel::Attribute(a) => Edge::Value(Equation::new(a, self.value_sets[a][index])),
            NodeLabel::Hypothesis(values) => {
                if index == 0 {
                    return Edge::Confirm(values);
                }
                let mut rest = index - 1;
                for (attr, set) in self.value_sets.iter().enumerate() {
                    let alternatives = set.len() - 1;
                    if rest < alternatives {
                        let value = set
                            .iter()
                            .copied()
                            .filter(|&v| v != values[attr])
                            .nth(rest)
                            .expect("counterexample index in range");
                        return Edge::Value(Equation::new(attr, value));
                    }
                    rest -= alternatives;
                }
                panic!("edge index {index} out of range for node {parent}")
            }
        }
    }

    /// Iterates `(child, edge)` pairs of a node in answer order.
    pub fn edges(&self, parent: NodeId) -> impl Iterator<Item = (NodeId, Edge<'_>)> + '_ {
        self.children(parent)
            .enumerate()
            .map(move |(i, child)| (child, self.edge(parent, i)))
    }

    fn hypothesis_values(&self, off: u32) -> &[u32] {
        let off = off as usize;
        &self.hypotheses[off..off + self.n_attributes]
    }

    /// Deterministic text form, one node per line in id order:
    ///
    /// ```text
    /// 0 W f1 1:f1=0 2:f1=1
    /// 1 T 1
    /// 3 W H[f1=0,f2=1] 4:H[f1=0,f2=1] 5:f1=1 6:f2=0
    /// ```
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for id in 0..self.nodes.len() {
            match self.label(id) {
                NodeLabel::Terminal(d) => {
                    let _ = writeln!(out, "{id} T {d}");
                }
                NodeLabel::Attribute(a) => {
                    let _ = write!(out, "{id} W f{}", a + 1);
                    self.write_edges(&mut out, id);
                }
                NodeLabel::Hypothesis(v) => {
                    let _ = write!(out, "{id} W ");
                    let _ = write_hypothesis(&mut out, v);
                    self.write_edges(&mut out, id);
                }
            }
        }
        out
    }

    fn write_edges(&self, out: &mut String, id: NodeId) {
        for (child, edge) in self.edges(id) {
            let _ = write!(out, " {child}:{edge}");
        }
        out.push('\n');
    }
}

/// Incremental tree construction over a table: nodes start pending and are
/// either closed as terminals or expanded with a query.
pub struct TreeBuilder<'a> {
    table: &'a DecisionTable,
    tree: DecisionTree,
    budget: usize,
}

impl<'a> TreeBuilder<'a> {
    /// Starts a tree whose pending root is labelled with the whole table.
    pub fn new(table: &'a DecisionTable) -> Self {
        Self::with_budget(table, DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(table: &'a DecisionTable, budget: usize) -> Self {
        let tree = DecisionTree {
            n_attributes: table.n_attributes(),
            value_sets: table.value_sets().to_vec(),
            nodes: vec![Node {
                label: Label::Pending,
                first_child: 0,
                child_count: 0,
                rows: table.n_rows() as u32,
            }],
            hypotheses: Vec::new(),
        };
        Self {
            table,
            tree,
            budget: budget.max(1),
        }
    }

    pub fn table(&self) -> &'a DecisionTable {
        self.table
    }

    pub fn node_count(&self) -> usize {
        self.tree.nodes.len()
    }

    fn pending(&self, node: NodeId) -> Result<()> {
        match self.tree.nodes.get(node) {
            Some(n) if n.label == Label::Pending => Ok(()),
            _ => Err(Error::Spec(format!("node {node} is not pending"))),
        }
    }

    pub fn set_terminal(&mut self, node: NodeId, decision: u32) -> Result<()> {
        self.pending(node)?;
        self.tree.nodes[node].label = Label::Terminal(decision);
        Ok(())
    }

    /// Labels `node` with `query` and creates one pending child per answer.
    /// `theta` must be the subtable reached at `node`; the children's
    /// subtables are returned in answer order.
    pub fn set_query(
        &mut self,
        node: NodeId,
        query: &Query,
        theta: &SubtableRef<'a>,
    ) -> Result<Vec<(NodeId, SubtableRef<'a>)>> {
        self.pending(node)?;
        let table = self.table;
        let (label, buckets) = match query {
            Query::Attribute(attr) => {
                table.check_attr(*attr)?;
                let mut buckets = vec![Vec::new(); table.value_sets()[*attr].len()];
                for &r in theta.rows() {
                    buckets[table.code(r as usize, *attr)].push(r);
                }
                (Label::Attribute(*attr as u32), buckets)
            }
            Query::Hypothesis(h) => {
                let h = Hypothesis::new(table, h.values().to_vec())?;
                let offsets = table.slot_offsets();
                let n = table.n_attributes();
                let codes: Vec<usize> = h
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(a, v)| table.value_sets()[a].binary_search(v).expect("checked"))
                    .collect();
                // bucket 0 is the confirmation; then counterexamples in
                // (attribute, value) order, skipping each δ_i
                let index_of = |attr: usize, code: usize| {
                    1 + offsets[attr] - attr + if code > codes[attr] { code - 1 } else { code }
                };
                let mut buckets = vec![Vec::new(); 1 + offsets[n] - n];
                for &r in theta.rows() {
                    let rc = table.codes_of(r as usize);
                    let mut all = true;
                    for (attr, &c) in rc.iter().enumerate() {
                        let c = c as usize;
                        if c != codes[attr] {
                            all = false;
                            buckets[index_of(attr, c)].push(r);
                        }
                    }
                    if all {
                        buckets[0].push(r);
                    }
                }
                let off = self.tree.hypotheses.len() as u32;
                self.tree.hypotheses.extend_from_slice(h.values());
                (Label::Hypothesis(off), buckets)
            }
        };

        let first = self.tree.nodes.len();
        if first + buckets.len() > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        let node_ref = &mut self.tree.nodes[node];
        node_ref.label = label;
        node_ref.first_child = first as u32;
        node_ref.child_count = buckets.len() as u32;

        let mut children = Vec::with_capacity(buckets.len());
        for (i, rows) in buckets.into_iter().enumerate() {
            self.tree.nodes.push(Node {
                label: Label::Pending,
                first_child: 0,
                child_count: 0,
                rows: rows.len() as u32,
            });
            children.push((first + i, SubtableRef::from_sorted(table, rows)));
        }
        Ok(children)
    }

    pub fn finish(self) -> Result<DecisionTree> {
        if let Some(id) = self.tree.nodes.iter().position(|n| n.label == Label::Pending) {
            return Err(Error::Spec(format!("node {id} was never labelled")));
        }
        Ok(self.tree)
    }
}

/// Options for [`build_tree_with`].
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub node_budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// One greedy step: closes `node` as a terminal when `theta` is degenerate,
/// otherwise labels it with the minimum-impurity query for type `k`.
/// Returns the new pending children with their subtables.
pub fn expand_node<'a>(
    builder: &mut TreeBuilder<'a>,
    node: NodeId,
    theta: &SubtableRef<'a>,
    k: TreeType,
    u: Measure,
) -> Result<Vec<(NodeId, SubtableRef<'a>)>> {
    if theta.is_degenerate() {
        let decision = theta
            .rows()
            .first()
            .map_or(0, |&r| theta.base().decision(r as usize));
        builder.set_terminal(node, decision)?;
        return Ok(Vec::new());
    }
    let (query, _) = BranchProfile::compute(theta, u)
        .select(k)
        .ok_or_else(|| Error::Data("no admissible query for a nondegenerate subtable".into()))?;
    builder.set_query(node, &query, theta)
}

/// Builds the greedy tree of type `k` for `table` under measure `u`.
pub fn build_tree(table: &DecisionTable, k: TreeType, u: Measure) -> Result<DecisionTree> {
    build_tree_with(table, k, u, &BuildOptions::default())
}

pub fn build_tree_with(
    table: &DecisionTable,
    k: TreeType,
    u: Measure,
    options: &BuildOptions,
) -> Result<DecisionTree> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut builder = TreeBuilder::with_budget(table, options.node_budget);
    let mut queue = VecDeque::new();
    queue.push_back((builder.node_count() - 1, table.full()));
    while let Some((node, theta)) = queue.pop_front() {
        queue.extend(expand_node(&mut builder, node, &theta, k, u)?);
    }
    builder.finish()
}
