//! Attribute and hypothesis queries, their answers, impurity and the
//! minimum-impurity selection rules used by the greedy builder.

use std::fmt;

use crate::builder::TreeType;
use crate::error::{Error, Result};
use crate::table::{DecisionTable, Equation, EquationSystem, SubtableRef};
use crate::uncertainty::Measure;

/// A full assignment of one value per attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypothesis {
    values: Vec<u32>,
}

impl Hypothesis {
    /// Checks the length and that every value belongs to `E(T, f_i)`.
    pub fn new(base: &DecisionTable, values: Vec<u32>) -> Result<Self> {
        if values.len() != base.n_attributes() {
            return Err(Error::HypothesisLength {
                found: values.len(),
                expected: base.n_attributes(),
            });
        }
        for (attr, v) in values.iter().enumerate() {
            if base.value_sets()[attr].binary_search(v).is_err() {
                return Err(Error::Data(format!(
                    "value {v} is not a value of f{} in the table",
                    attr + 1
                )));
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn system(&self) -> EquationSystem {
        EquationSystem::from_assignment(&self.values)
    }

    /// Whether the assignment is a row of `base`.
    pub fn is_proper(&self, base: &DecisionTable) -> bool {
        base.find_row(&self.values).is_some()
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_hypothesis(f, &self.values)
    }
}

pub(crate) fn write_hypothesis(f: &mut impl fmt::Write, values: &[u32]) -> fmt::Result {
    f.write_str("H[")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "f{}={}", i + 1, v)?;
    }
    f.write_char(']')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Query {
    Attribute(usize),
    Hypothesis(Hypothesis),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Attribute(i) => write!(f, "f{}", i + 1),
            Query::Hypothesis(h) => h.fmt(f),
        }
    }
}

/// An answer to a query: either the hypothesis itself, or a single equation
/// (the value of an attribute, or a counterexample).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Answer {
    Confirm(Hypothesis),
    Equation(Equation),
}

impl Answer {
    pub fn system(&self) -> EquationSystem {
        match self {
            Answer::Confirm(h) => h.system(),
            Answer::Equation(eq) => EquationSystem::singleton(eq.attr, eq.value),
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Confirm(h) => h.fmt(f),
            Answer::Equation(eq) => eq.fmt(f),
        }
    }
}

/// All answers of `q` over the base table, in canonical order: attribute
/// values ascending; for hypotheses the confirmation first, then
/// counterexamples by (attribute, value).
pub fn answers(q: &Query, base: &DecisionTable) -> Result<Vec<Answer>> {
    match q {
        Query::Attribute(i) => Ok(base
            .value_set(*i)?
            .iter()
            .map(|&v| Answer::Equation(Equation::new(*i, v)))
            .collect()),
        Query::Hypothesis(h) => {
            if h.values.len() != base.n_attributes() {
                return Err(Error::HypothesisLength {
                    found: h.values.len(),
                    expected: base.n_attributes(),
                });
            }
            let mut out = vec![Answer::Confirm(h.clone())];
            for (attr, set) in base.value_sets().iter().enumerate() {
                out.extend(
                    set.iter()
                        .filter(|&&v| v != h.values[attr])
                        .map(|&v| Answer::Equation(Equation::new(attr, v))),
                );
            }
            Ok(out)
        }
    }
}

pub fn is_proper(h: &Hypothesis, base: &DecisionTable) -> bool {
    h.is_proper(base)
}

/// Maximum of `u` over the answer subtables of `q` (reference route).
pub fn impurity(q: &Query, theta: &SubtableRef<'_>, u: Measure) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in answers(q, theta.base())? {
        let v = u.evaluate(&theta.apply(&a.system())?);
        if v > worst {
            worst = v;
        }
    }
    Ok(worst)
}

pub fn is_admissible_attribute(attr: usize, theta: &SubtableRef<'_>) -> Result<bool> {
    Ok(!theta.is_constant(attr)?)
}

pub fn is_admissible_hypothesis(h: &Hypothesis, theta: &SubtableRef<'_>) -> Result<bool> {
    for (attr, &v) in h.values.iter().enumerate() {
        if let Some(c) = theta.constant_value(attr)? {
            if c != v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn best_attribute(theta: &SubtableRef<'_>, u: Measure) -> Result<(Query, f64)> {
    let profile = BranchProfile::compute(theta, u);
    let (attr, imp) = profile.best_attribute().ok_or_else(no_admissible)?;
    Ok((Query::Attribute(attr), imp))
}

pub fn best_hypothesis(theta: &SubtableRef<'_>, u: Measure) -> Result<(Query, f64)> {
    require_nondegenerate(theta)?;
    let profile = BranchProfile::compute(theta, u);
    let (codes, imp) = profile.best_hypothesis();
    Ok((Query::Hypothesis(profile.decode(&codes)), imp))
}

pub fn best_proper_hypothesis(theta: &SubtableRef<'_>, u: Measure) -> Result<(Query, f64)> {
    require_nondegenerate(theta)?;
    let profile = BranchProfile::compute(theta, u);
    let (h, imp) = profile.best_proper_hypothesis();
    Ok((Query::Hypothesis(h), imp))
}

/// Minimum-impurity admissible query for a tree of type `k`.
pub fn select_query(theta: &SubtableRef<'_>, u: Measure, k: TreeType) -> Result<(Query, f64)> {
    require_nondegenerate(theta)?;
    BranchProfile::compute(theta, u)
        .select(k)
        .ok_or_else(no_admissible)
}

fn require_nondegenerate(theta: &SubtableRef<'_>) -> Result<()> {
    if theta.is_degenerate() {
        Err(Error::Data("query selection needs a nondegenerate subtable".into()))
    } else {
        Ok(())
    }
}

fn no_admissible() -> Error {
    Error::Data("no admissible attribute for the subtable".into())
}

/// Per-(attribute, value) branch statistics of one subtable: the row count
/// and uncertainty of every `Θ{f_i = σ}` with `σ ∈ E(T, f_i)`.
///
/// All selection rules are answered from this profile in `O(slots)` or
/// `O(rows * n)` time without materialising the branch subtables.
pub(crate) struct BranchProfile<'a> {
    base: &'a DecisionTable,
    offsets: &'a [usize],
    counts: Vec<u32>,
    unc: Vec<f64>,
}

impl<'a> BranchProfile<'a> {
    pub(crate) fn compute(theta: &SubtableRef<'a>, u: Measure) -> Self {
        let base = theta.base();
        let n = base.n_attributes();
        let d = base.decision_set().len().max(1);
        let offsets = base.slot_offsets();
        let slots = offsets[n];

        let mut table = vec![0usize; slots * d];
        for &r in theta.rows() {
            let r = r as usize;
            let dc = base.decision_code(r);
            for (attr, &code) in base.codes_of(r).iter().enumerate() {
                table[(offsets[attr] + code as usize) * d + dc] += 1;
            }
        }
        let mut counts = Vec::with_capacity(slots);
        let mut unc = Vec::with_capacity(slots);
        for chunk in table.chunks_exact(d) {
            counts.push(chunk.iter().sum::<usize>() as u32);
            unc.push(u.of_counts(chunk));
        }
        Self {
            base,
            offsets,
            counts,
            unc,
        }
    }

    fn slots(&self, attr: usize) -> std::ops::Range<usize> {
        self.offsets[attr]..self.offsets[attr + 1]
    }

    /// Code of the single value taken by `attr`, if constant on a nonempty Θ.
    fn constant_code(&self, attr: usize) -> Option<usize> {
        let mut found = None;
        for s in self.slots(attr) {
            if self.counts[s] > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(s - self.offsets[attr]);
            }
        }
        found
    }

    fn attribute_impurity(&self, attr: usize) -> f64 {
        self.unc[self.slots(attr)].iter().copied().fold(0.0, f64::max)
    }

    pub(crate) fn best_attribute(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for attr in 0..self.base.n_attributes() {
            if self.constant_code(attr).is_some() {
                continue;
            }
            let imp = self.attribute_impurity(attr);
            if best.is_none_or(|(_, b)| imp < b) {
                best = Some((attr, imp));
            }
        }
        best
    }

    /// Per attribute: the largest branch uncertainty, the smallest value
    /// code attaining it, and the largest uncertainty over the other codes.
    fn top_two(&self, attr: usize) -> (f64, usize, f64) {
        let range = self.slots(attr);
        let mut first = f64::NEG_INFINITY;
        let mut arg = 0;
        for (code, s) in range.clone().enumerate() {
            if self.unc[s] > first {
                first = self.unc[s];
                arg = code;
            }
        }
        let second = range
            .enumerate()
            .filter(|&(code, _)| code != arg)
            .map(|(_, s)| self.unc[s])
            .fold(0.0, f64::max);
        (first, arg, second)
    }

    /// Value codes of the minimum-impurity hypothesis and its impurity.
    pub(crate) fn best_hypothesis(&self) -> (Vec<u32>, f64) {
        let n = self.base.n_attributes();
        let mut codes = Vec::with_capacity(n);
        let mut imp = 0.0f64;
        for attr in 0..n {
            let (code, other) = match self.constant_code(attr) {
                Some(c) => {
                    let (first, arg, second) = self.top_two(attr);
                    let other = if arg == c { second } else { first };
                    (c, other)
                }
                None => {
                    let (_, arg, second) = self.top_two(attr);
                    (arg, second)
                }
            };
            codes.push(code as u32);
            imp = imp.max(other);
        }
        (codes, imp)
    }

    /// Minimum-impurity admissible proper hypothesis. The unrestricted
    /// optimum is returned when it is a row of the table; otherwise rows
    /// are scanned in table order and the first minimiser wins.
    pub(crate) fn best_proper_hypothesis(&self) -> (Hypothesis, f64) {
        let (codes, global) = self.best_hypothesis();
        let h = self.decode(&codes);
        if h.is_proper(self.base) {
            return (h, global);
        }

        let n = self.base.n_attributes();
        let tops: Vec<(f64, usize, f64)> = (0..n).map(|a| self.top_two(a)).collect();
        let constants: Vec<Option<usize>> = (0..n).map(|a| self.constant_code(a)).collect();

        let mut best: Option<(usize, f64)> = None;
        for row in 0..self.base.n_rows() {
            let rc = self.base.codes_of(row);
            let admissible = constants
                .iter()
                .zip(rc)
                .all(|(c, &code)| c.is_none_or(|c| c == code as usize));
            if !admissible {
                continue;
            }
            let imp = rc
                .iter()
                .zip(&tops)
                .map(|(&code, &(first, arg, second))| if code as usize == arg { second } else { first })
                .fold(0.0, f64::max);
            if best.is_none_or(|(_, b)| imp < b) {
                best = Some((row, imp));
                if imp <= global {
                    break;
                }
            }
        }
        // Θ is nonempty, and each of its rows is admissible.
        let (row, imp) = best.expect("an admissible proper hypothesis exists");
        (
            Hypothesis::from_values_unchecked(self.base.row(row).to_vec()),
            imp,
        )
    }

    pub(crate) fn decode(&self, codes: &[u32]) -> Hypothesis {
        let values = codes
            .iter()
            .enumerate()
            .map(|(attr, &c)| self.base.value_sets()[attr][c as usize])
            .collect();
        Hypothesis::from_values_unchecked(values)
    }

    pub(crate) fn select(&self, k: TreeType) -> Option<(Query, f64)> {
        let attribute = || {
            self.best_attribute()
                .map(|(a, imp)| (Query::Attribute(a), imp))
        };
        let hypothesis = || {
            let (codes, imp) = self.best_hypothesis();
            (Query::Hypothesis(self.decode(&codes)), imp)
        };
        let proper = || {
            let (h, imp) = self.best_proper_hypothesis();
            (Query::Hypothesis(h), imp)
        };
        let prefer_attribute = |a: Option<(Query, f64)>, h: (Query, f64)| match a {
            Some(a) if a.1 <= h.1 => a,
            _ => h,
        };
        match k.get() {
            1 => attribute(),
            2 => Some(hypothesis()),
            3 => Some(prefer_attribute(attribute(), hypothesis())),
            4 => Some(proper()),
            5 => Some(prefer_attribute(attribute(), proper())),
            _ => unreachable!("TreeType is validated"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::tests::t0;

    fn tt(k: u8) -> TreeType {
        TreeType::new(k).unwrap()
    }

    fn hyp(t: &DecisionTable, v: &[u32]) -> Hypothesis {
        Hypothesis::new(t, v.to_vec()).unwrap()
    }

    fn sub<'a>(t: &'a DecisionTable, eqs: &[(usize, u32)]) -> SubtableRef<'a> {
        let s = EquationSystem::from_equations(eqs.iter().map(|&(a, v)| Equation::new(a, v))).unwrap();
        t.full().apply(&s).unwrap()
    }

    #[test]
    fn attribute_answers() {
        let t = t0();
        let a = answers(&Query::Attribute(0), &t).unwrap();
        assert_eq!(
            a,
            vec![
                Answer::Equation(Equation::new(0, 0)),
                Answer::Equation(Equation::new(0, 1))
            ]
        );
    }

    #[test]
    fn hypothesis_answers() {
        let t = t0();
        let h = hyp(&t, &[0, 0, 0]);
        let a = answers(&Query::Hypothesis(h.clone()), &t).unwrap();
        let rendered: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, vec!["H[f1=0,f2=0,f3=0]", "f1=1", "f2=1", "f3=1"]);

        let t3 = DecisionTable::with_default_names(
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 2]],
            vec![0, 1, 1],
        )
        .unwrap();
        let a = answers(&Query::Hypothesis(hyp(&t3, &[0, 1])), &t3).unwrap();
        let f2: Vec<&Answer> = a
            .iter()
            .filter(|x| matches!(x, Answer::Equation(e) if e.attr == 1))
            .collect();
        assert_eq!(
            f2,
            vec![
                &Answer::Equation(Equation::new(1, 0)),
                &Answer::Equation(Equation::new(1, 2))
            ]
        );
    }

    #[test]
    fn proper_hypotheses() {
        let t = t0();
        assert!(hyp(&t, &[0, 0, 0]).is_proper(&t));
        assert!(!hyp(&t, &[0, 0, 1]).is_proper(&t));
        let one = DecisionTable::with_default_names(2, vec![vec![3, 5]], vec![1]).unwrap();
        assert!(hyp(&one, &[3, 5]).is_proper(&one));
        assert!(Hypothesis::new(&t, vec![0, 2, 0]).is_err());
        assert!(Hypothesis::new(&t, vec![0, 0]).is_err());
    }

    #[test]
    fn impurity_examples() {
        let t = t0();
        let full = t.full();
        assert_eq!(impurity(&Query::Attribute(0), &full, Measure::Me).unwrap(), 0.0);
        assert_eq!(impurity(&Query::Attribute(1), &full, Measure::Me).unwrap(), 1.0);
        let h = Query::Hypothesis(hyp(&t, &[0, 0, 0]));
        assert_eq!(impurity(&h, &full, Measure::Me).unwrap(), 1.0);
    }

    #[test]
    fn admissibility() {
        let t = t0();
        let left = sub(&t, &[(0, 0)]);
        assert!(!is_admissible_attribute(0, &left).unwrap());
        assert!(is_admissible_attribute(1, &t.full()).unwrap());
        assert!(!is_admissible_hypothesis(&hyp(&t, &[1, 0, 0]), &left).unwrap());
        assert!(is_admissible_hypothesis(&hyp(&t, &[0, 1, 0]), &left).unwrap());
    }

    #[test]
    fn best_attribute_examples() {
        let t = t0();
        assert_eq!(
            best_attribute(&t.full(), Measure::Me).unwrap(),
            (Query::Attribute(0), 0.0)
        );
        let two = DecisionTable::with_default_names(1, vec![vec![0], vec![1]], vec![1, 2]).unwrap();
        assert_eq!(
            best_attribute(&two.full(), Measure::Me).unwrap(),
            (Query::Attribute(0), 0.0)
        );
        // T0 without f1: attributes (f2, f3), both impurity 1.
        let t = DecisionTable::with_default_names(
            2,
            vec![vec![0, 0], vec![1, 1], vec![0, 1], vec![1, 0]],
            vec![1, 1, 2, 2],
        )
        .unwrap();
        assert_eq!(
            best_attribute(&t.full(), Measure::Me).unwrap(),
            (Query::Attribute(0), 1.0)
        );
    }

    #[test]
    fn best_hypothesis_examples() {
        let t = t0();
        let (q, imp) = best_hypothesis(&t.full(), Measure::Me).unwrap();
        assert_eq!(q, Query::Hypothesis(hyp(&t, &[0, 0, 0])));
        assert_eq!(imp, 1.0);
        let (q, imp) = best_hypothesis(&t.full(), Measure::Gini).unwrap();
        assert_eq!(q, Query::Hypothesis(hyp(&t, &[0, 0, 0])));
        assert_eq!(imp, 0.5);

        // Every branch of every attribute is degenerate.
        let t = DecisionTable::with_default_names(
            2,
            vec![vec![0, 0], vec![1, 1]],
            vec![1, 2],
        )
        .unwrap();
        let (_, imp) = best_hypothesis(&t.full(), Measure::Ent).unwrap();
        assert_eq!(imp, 0.0);
    }

    #[test]
    fn best_hypothesis_forces_constants() {
        let t = DecisionTable::with_default_names(
            3,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
            vec![1, 2, 2, 1],
        )
        .unwrap();
        let right = sub(&t, &[(0, 1)]);
        let (q, _) = best_hypothesis(&right, Measure::Me).unwrap();
        let Query::Hypothesis(h) = q else { panic!() };
        assert_eq!(h.values()[0], 1);
        assert!(is_admissible_hypothesis(&h, &right).unwrap());
        let left = sub(&t, &[(0, 0)]);
        let (q, _) = best_hypothesis(&left, Measure::Me).unwrap();
        let Query::Hypothesis(h) = q else { panic!() };
        assert_eq!(h.values()[0], 0);
        assert!(is_admissible_hypothesis(&h, &left).unwrap());
    }

    #[test]
    fn best_proper_hypothesis_examples() {
        let t = t0();
        let (q, imp) = best_proper_hypothesis(&t.full(), Measure::Me).unwrap();
        // brute force over the four rows
        let mut best = (f64::INFINITY, 0);
        for r in 0..4 {
            let h = Query::Hypothesis(hyp(&t, t.row(r)));
            let i = impurity(&h, &t.full(), Measure::Me).unwrap();
            if i < best.0 {
                best = (i, r);
            }
        }
        assert_eq!(imp, best.0);
        assert_eq!(q, Query::Hypothesis(hyp(&t, &[0, 0, 0])));

        let two = DecisionTable::with_default_names(1, vec![vec![0], vec![1]], vec![1, 2]).unwrap();
        let (q, imp) = best_proper_hypothesis(&two.full(), Measure::Me).unwrap();
        assert_eq!((q, imp), (Query::Hypothesis(hyp(&two, &[0])), 0.0));
    }

    #[test]
    fn best_proper_scans_when_optimum_is_not_a_row() {
        // E(f1) = {0,1}, E(f2) = {0,1}; rows exclude (1,1), which is the
        // unrestricted optimum for this labelling.
        let t = DecisionTable::with_default_names(
            2,
            vec![vec![0, 0], vec![0, 1], vec![1, 0]],
            vec![0, 1, 1],
        )
        .unwrap();
        let (hq, himp) = best_hypothesis(&t.full(), Measure::Me).unwrap();
        let (pq, pimp) = best_proper_hypothesis(&t.full(), Measure::Me).unwrap();
        assert!(pimp >= himp);
        let Query::Hypothesis(p) = pq else { panic!() };
        assert!(p.is_proper(&t));
        assert_eq!(impurity(&Query::Hypothesis(p), &t.full(), Measure::Me).unwrap(), pimp);
        let _ = hq;
    }

    #[test]
    fn select_query_by_type() {
        let t = t0();
        let full = t.full();
        assert_eq!(
            select_query(&full, Measure::Me, tt(3)).unwrap(),
            (Query::Attribute(0), 0.0)
        );
        assert_eq!(
            select_query(&full, Measure::Me, tt(2)).unwrap(),
            (Query::Hypothesis(hyp(&t, &[0, 0, 0])), 1.0)
        );
        assert_eq!(select_query(&full, Measure::Me, tt(1)).unwrap().0, Query::Attribute(0));
    }

    #[test]
    fn select_prefers_attribute_on_ties() {
        // Two rows differing in one attribute: attribute and hypothesis both
        // reach impurity 0.
        let t = DecisionTable::with_default_names(1, vec![vec![0], vec![1]], vec![1, 2]).unwrap();
        for k in [3, 5] {
            let (q, imp) = select_query(&t.full(), Measure::Me, tt(k)).unwrap();
            assert_eq!((q, imp), (Query::Attribute(0), 0.0));
        }
    }

    #[test]
    fn selection_requires_nondegenerate() {
        let t = t0();
        let left = sub(&t, &[(0, 0)]);
        assert!(select_query(&left, Measure::Me, tt(1)).is_err());
    }
}
