//! Decision tables, equation systems and subtable views.
//!
//! Attribute indices are zero-based in the API and rendered one-based
//! (`f1`, `f2`, ...) in every textual format.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A single equation `f_{attr+1} = value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Equation {
    pub attr: usize,
    pub value: u32,
}

impl Equation {
    pub fn new(attr: usize, value: u32) -> Self {
        Self { attr, value }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}={}", self.attr + 1, self.value)
    }
}

/// A consistent set of equations, at most one per attribute.
///
/// Equations are kept sorted by attribute so equality is order-independent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EquationSystem {
    equations: Vec<Equation>,
}

impl EquationSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(attr: usize, value: u32) -> Self {
        Self {
            equations: vec![Equation::new(attr, value)],
        }
    }

    /// Builds a system from arbitrary equations. Duplicates collapse; two
    /// different values for one attribute are rejected.
    pub fn from_equations<I>(equations: I) -> Result<Self>
    where
        I: IntoIterator<Item = Equation>,
    {
        let mut system = Self::new();
        for eq in equations {
            system.insert(eq)?;
        }
        Ok(system)
    }

    /// Full assignment `f_1 = values[0], ..., f_n = values[n-1]`.
    pub fn from_assignment(values: &[u32]) -> Self {
        Self {
            equations: values
                .iter()
                .enumerate()
                .map(|(attr, &value)| Equation::new(attr, value))
                .collect(),
        }
    }

    /// Inserts an equation. Returns `Ok(false)` if it was already present.
    pub fn insert(&mut self, eq: Equation) -> Result<bool> {
        match self.equations.binary_search_by_key(&eq.attr, |e| e.attr) {
            Ok(pos) => {
                let existing = self.equations[pos].value;
                if existing == eq.value {
                    Ok(false)
                } else {
                    Err(Error::ConflictingEquation {
                        attr: eq.attr,
                        first: existing,
                        second: eq.value,
                    })
                }
            }
            Err(pos) => {
                self.equations.insert(pos, eq);
                Ok(true)
            }
        }
    }

    pub fn union(&self, other: &EquationSystem) -> Result<EquationSystem> {
        let mut out = self.clone();
        for &eq in &other.equations {
            out.insert(eq)?;
        }
        Ok(out)
    }

    pub fn get(&self, attr: usize) -> Option<u32> {
        self.equations
            .binary_search_by_key(&attr, |e| e.attr)
            .ok()
            .map(|pos| self.equations[pos].value)
    }

    pub fn contains(&self, eq: &Equation) -> bool {
        self.get(eq.attr) == Some(eq.value)
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Equation> + '_ {
        self.equations.iter()
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    pub fn is_satisfied_by(&self, row: &[u32]) -> bool {
        self.equations
            .iter()
            .all(|eq| row.get(eq.attr) == Some(&eq.value))
    }

    /// Checks that every equation refers to an attribute below `n`.
    pub fn check_attributes(&self, n: usize) -> Result<()> {
        match self.equations.last() {
            Some(eq) if eq.attr >= n => Err(Error::AttributeIndex {
                index: eq.attr,
                attributes: n,
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, eq) in self.equations.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{eq}")?;
        }
        f.write_str("}")
    }
}

/// Immutable decision table with pairwise-distinct rows.
#[derive(Debug, Clone)]
pub struct DecisionTable {
    names: Vec<String>,
    n: usize,
    values: Vec<u32>,
    decisions: Vec<u32>,
    value_sets: Vec<Vec<u32>>,
    // per cell: position of the value inside value_sets[attr]
    codes: Vec<u32>,
    // slot offsets of each attribute in the flattened (attr, value) space
    offsets: Vec<usize>,
    decision_set: Vec<u32>,
    decision_codes: Vec<u32>,
    lookup: HashMap<Box<[u32]>, u32>,
}

impl DecisionTable {
    /// Builds a table. Every row must have `names.len()` values and no two
    /// rows may share the same values.
    pub fn new(names: Vec<String>, rows: Vec<Vec<u32>>, decisions: Vec<u32>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::NoAttributes);
        }
        if rows.len() != decisions.len() {
            return Err(Error::Data(format!(
                "{} rows but {} decisions",
                rows.len(),
                decisions.len()
            )));
        }
        if rows.len() >= u32::MAX as usize {
            return Err(Error::Data("too many rows".into()));
        }

        let mut values = Vec::with_capacity(rows.len() * n);
        let mut lookup: HashMap<Box<[u32]>, u32> = HashMap::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RowLength {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            if let Some(&first) = lookup.get(row.as_slice()) {
                return Err(Error::DuplicateRow {
                    first: first as usize,
                    second: i,
                });
            }
            lookup.insert(row.clone().into_boxed_slice(), i as u32);
            values.extend_from_slice(row);
        }

        let mut value_sets = vec![Vec::new(); n];
        for (attr, set) in value_sets.iter_mut().enumerate() {
            let mut vs: Vec<u32> = rows.iter().map(|r| r[attr]).collect();
            vs.sort_unstable();
            vs.dedup();
            *set = vs;
        }
        let codes = values
            .iter()
            .enumerate()
            .map(|(cell, &v)| {
                let attr = cell % n;
                value_sets[attr].binary_search(&v).expect("value in set") as u32
            })
            .collect();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0;
        offsets.push(0);
        for set in &value_sets {
            acc += set.len();
            offsets.push(acc);
        }

        let mut decision_set = decisions.clone();
        decision_set.sort_unstable();
        decision_set.dedup();
        let decision_codes = decisions
            .iter()
            .map(|d| decision_set.binary_search(d).expect("decision in set") as u32)
            .collect();

        Ok(Self {
            names,
            n,
            values,
            decisions,
            value_sets,
            codes,
            offsets,
            decision_set,
            decision_codes,
            lookup,
        })
    }

    /// Table with attributes named `f1..fn`.
    pub fn with_default_names(n: usize, rows: Vec<Vec<u32>>, decisions: Vec<u32>) -> Result<Self> {
        let names = (1..=n).map(|i| format!("f{i}")).collect();
        Self::new(names, rows, decisions)
    }

    pub fn n_attributes(&self) -> usize {
        self.n
    }

    pub fn n_rows(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    pub fn attribute_names(&self) -> &[String] {
        &self.names
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn decision(&self, i: usize) -> u32 {
        self.decisions[i]
    }

    pub fn decisions(&self) -> &[u32] {
        &self.decisions
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[u32], u32)> + '_ {
        self.values
            .chunks_exact(self.n)
            .zip(self.decisions.iter().copied())
    }

    /// `E(T, f_i)` in ascending order.
    pub fn value_set(&self, attr: usize) -> Result<&[u32]> {
        self.check_attr(attr)?;
        Ok(&self.value_sets[attr])
    }

    pub fn value_sets(&self) -> &[Vec<u32>] {
        &self.value_sets
    }

    /// `D(T)` in ascending order.
    pub fn decision_set(&self) -> &[u32] {
        &self.decision_set
    }

    /// Index of the row with exactly these attribute values, if any.
    pub fn find_row(&self, values: &[u32]) -> Option<usize> {
        self.lookup.get(values).map(|&i| i as usize)
    }

    /// View over all rows.
    pub fn full(&self) -> SubtableRef<'_> {
        SubtableRef {
            base: self,
            rows: (0..self.n_rows() as u32).collect(),
        }
    }

    pub(crate) fn check_attr(&self, attr: usize) -> Result<()> {
        if attr < self.n {
            Ok(())
        } else {
            Err(Error::AttributeIndex {
                index: attr,
                attributes: self.n,
            })
        }
    }

    /// Position of row `row`'s value for `attr` within `value_set(attr)`.
    #[inline]
    pub(crate) fn code(&self, row: usize, attr: usize) -> usize {
        self.codes[row * self.n + attr] as usize
    }

    #[inline]
    pub(crate) fn codes_of(&self, row: usize) -> &[u32] {
        &self.codes[row * self.n..(row + 1) * self.n]
    }

    #[inline]
    pub(crate) fn decision_code(&self, row: usize) -> usize {
        self.decision_codes[row] as usize
    }

    /// Offsets of each attribute's value slots; `offsets[n]` is the total.
    pub(crate) fn slot_offsets(&self) -> &[usize] {
        &self.offsets
    }
}

/// Index view of a subtable: the rows of `base` selected by some system.
#[derive(Debug, Clone)]
pub struct SubtableRef<'a> {
    base: &'a DecisionTable,
    rows: Vec<u32>,
}

impl PartialEq for SubtableRef<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.base, other.base) && self.rows == other.rows
    }
}

impl Eq for SubtableRef<'_> {}

impl<'a> SubtableRef<'a> {
    /// View over an explicit row set. Indices must be strictly increasing
    /// and valid for `base`.
    pub fn new(base: &'a DecisionTable, rows: Vec<u32>) -> Result<Self> {
        if rows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Data("subtable rows must be strictly increasing".into()));
        }
        if let Some(&last) = rows.last() {
            if last as usize >= base.n_rows() {
                return Err(Error::Data(format!("row index {last} out of range")));
            }
        }
        Ok(Self { base, rows })
    }

    pub(crate) fn from_sorted(base: &'a DecisionTable, rows: Vec<u32>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0] < w[1]));
        Self { base, rows }
    }

    pub fn base(&self) -> &'a DecisionTable {
        self.base
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<u32> {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows of this view that satisfy every equation of `system`.
    pub fn apply(&self, system: &EquationSystem) -> Result<SubtableRef<'a>> {
        system.check_attributes(self.base.n)?;
        let rows = self
            .rows
            .iter()
            .copied()
            .filter(|&r| system.is_satisfied_by(self.base.row(r as usize)))
            .collect();
        Ok(SubtableRef {
            base: self.base,
            rows,
        })
    }

    /// Row counts per decision, indexed by position in `base().decision_set()`.
    pub fn decision_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.base.decision_set.len()];
        for &r in &self.rows {
            counts[self.base.decision_code(r as usize)] += 1;
        }
        counts
    }

    pub fn count_decision(&self, decision: u32) -> usize {
        self.rows
            .iter()
            .filter(|&&r| self.base.decision(r as usize) == decision)
            .count()
    }

    /// A most common decision; ties go to the smallest value, empty gives 0.
    pub fn most_common_decision(&self) -> u32 {
        let counts = self.decision_counts();
        let mut best: Option<(usize, usize)> = None;
        for (code, &c) in counts.iter().enumerate() {
            if c > 0 && best.is_none_or(|(_, bc)| c > bc) {
                best = Some((code, c));
            }
        }
        best.map_or(0, |(code, _)| self.base.decision_set[code])
    }

    pub fn is_degenerate(&self) -> bool {
        match self.rows.split_first() {
            None => true,
            Some((&first, rest)) => {
                let d = self.base.decision(first as usize);
                rest.iter().all(|&r| self.base.decision(r as usize) == d)
            }
        }
    }

    /// Whether attribute `attr` takes at most one value on this view.
    pub fn is_constant(&self, attr: usize) -> Result<bool> {
        self.base.check_attr(attr)?;
        Ok(self.constant_code(attr).is_some() || self.rows.is_empty())
    }

    /// The single value of `attr` on this view, if it is constant and nonempty.
    pub fn constant_value(&self, attr: usize) -> Result<Option<u32>> {
        self.base.check_attr(attr)?;
        Ok(self
            .constant_code(attr)
            .map(|code| self.base.value_sets[attr][code]))
    }

    fn constant_code(&self, attr: usize) -> Option<usize> {
        let (&first, rest) = self.rows.split_first()?;
        let code = self.base.code(first as usize, attr);
        rest.iter()
            .all(|&r| self.base.code(r as usize, attr) == code)
            .then_some(code)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// T0 = {(0,0,0)->1, (0,1,1)->1, (1,0,1)->2, (1,1,0)->2}
    pub(crate) fn t0() -> DecisionTable {
        DecisionTable::with_default_names(
            3,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
            vec![1, 1, 2, 2],
        )
        .unwrap()
    }

    fn sys(eqs: &[(usize, u32)]) -> EquationSystem {
        EquationSystem::from_equations(eqs.iter().map(|&(a, v)| Equation::new(a, v))).unwrap()
    }

    #[test]
    fn apply_system_filters_rows() {
        let t = t0();
        let full = t.full();
        assert_eq!(full.apply(&sys(&[(0, 0)])).unwrap().rows(), &[0, 1]);
        assert_eq!(full.apply(&EquationSystem::new()).unwrap(), full);
        assert_eq!(full.apply(&sys(&[(0, 0), (2, 1)])).unwrap().rows(), &[1]);
    }

    #[test]
    fn apply_rejects_bad_attribute() {
        let t = t0();
        let err = t.full().apply(&sys(&[(3, 0)])).unwrap_err();
        assert!(matches!(err, Error::AttributeIndex { index: 3, .. }));
    }

    #[test]
    fn value_sets() {
        let t = t0();
        assert_eq!(t.value_set(0).unwrap(), &[0, 1]);
        assert_eq!(t.value_set(2).unwrap(), &[0, 1]);
        assert!(t.value_set(3).is_err());
        let one = DecisionTable::with_default_names(2, vec![vec![4, 7]], vec![3]).unwrap();
        assert_eq!(one.value_set(1).unwrap(), &[7]);
    }

    #[test]
    fn counting() {
        let t = t0();
        let full = t.full();
        assert_eq!(full.len(), 4);
        assert_eq!(full.count_decision(1), 2);
        let empty = full.apply(&sys(&[(0, 0), (1, 0), (2, 1)])).unwrap();
        assert_eq!(empty.len(), 0);
        let right = full.apply(&sys(&[(0, 1)])).unwrap();
        assert_eq!(right.count_decision(2), 2);
    }

    #[test]
    fn most_common_decision_tie_breaks_low() {
        let t = t0();
        let empty = t.full().apply(&sys(&[(0, 0), (1, 0), (2, 1)])).unwrap();
        assert_eq!(empty.most_common_decision(), 0);

        let t = DecisionTable::with_default_names(1, vec![vec![0], vec![1], vec![2]], vec![1, 1, 2])
            .unwrap();
        assert_eq!(t.full().most_common_decision(), 1);
        let t = DecisionTable::with_default_names(1, vec![vec![0], vec![1]], vec![2, 1]).unwrap();
        assert_eq!(t.full().most_common_decision(), 1);
    }

    #[test]
    fn degenerate_and_constant() {
        let t = t0();
        let empty = SubtableRef::new(&t, vec![]).unwrap();
        assert!(empty.is_degenerate());
        assert!(!t.full().is_degenerate());
        let left = t.full().apply(&sys(&[(0, 0)])).unwrap();
        assert!(left.is_constant(0).unwrap());
        assert!(!left.is_constant(1).unwrap());
        assert_eq!(left.constant_value(0).unwrap(), Some(0));
        assert!(left.is_constant(5).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            DecisionTable::with_default_names(2, vec![vec![0, 1], vec![0, 1]], vec![0, 1]),
            Err(Error::DuplicateRow { first: 0, second: 1 })
        ));
        assert!(matches!(
            DecisionTable::with_default_names(2, vec![vec![0]], vec![0]),
            Err(Error::RowLength { .. })
        ));
        assert!(matches!(
            DecisionTable::new(vec![], vec![], vec![]),
            Err(Error::NoAttributes)
        ));
        assert!(DecisionTable::with_default_names(2, vec![], vec![]).is_ok());
    }

    #[test]
    fn equation_system_semantics() {
        let a = sys(&[(2, 1), (0, 0), (2, 1)]);
        let b = sys(&[(0, 0), (2, 1)]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
        assert!(EquationSystem::from_equations([Equation::new(0, 0), Equation::new(0, 1)]).is_err());
        assert_eq!(a.to_string(), "{f1=0,f3=1}");
    }

    #[test]
    fn subtable_new_validates() {
        let t = t0();
        assert!(SubtableRef::new(&t, vec![1, 0]).is_err());
        assert!(SubtableRef::new(&t, vec![4]).is_err());
        assert!(SubtableRef::new(&t, vec![0, 3]).is_ok());
    }
}
