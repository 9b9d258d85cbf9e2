use std::collections::BTreeSet;

use proptest::prelude::*;

use hyptree::builder::{NodeLabel, TreeType};
use hyptree::metrics::{depth, realizable_count, simulate, validate, first_counterexample, ValidateOptions};
use hyptree::queries::{answers, best_attribute, impurity, select_query};
use hyptree::rules::{complete_paths, derive_rules, reduce_system};
use hyptree::{build_tree, DecisionTable, Measure, Query};

fn table() -> impl Strategy<Value = DecisionTable> {
    (1usize..=4, 2u32..=3, 1u32..=3).prop_flat_map(|(n, arity, classes)| {
        prop::collection::vec(
            (prop::collection::vec(0..arity, n), 0..classes),
            1..24,
        )
        .prop_map(move |rows| {
            let mut seen = BTreeSet::new();
            let (r, d): (Vec<_>, Vec<_>) = rows
                .into_iter()
                .filter(|(row, _)| seen.insert(row.clone()))
                .unzip();
            DecisionTable::with_default_names(n, r, d).unwrap()
        })
    })
}

fn measure() -> impl Strategy<Value = Measure> {
    prop::sample::select(Measure::ALL.to_vec())
}

fn tree_type() -> impl Strategy<Value = TreeType> {
    prop::sample::select(TreeType::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn built_trees_are_valid(t in table(), u in measure(), k in tree_type()) {
        let g = build_tree(&t, k, u).unwrap();
        let report = validate(&t, &g, &ValidateOptions::default());
        prop_assert!(report.is_ok(), "{}", report);
        for row in 0..t.n_rows() {
            prop_assert_eq!(simulate(&t, &g, row, first_counterexample).unwrap(), t.decision(row));
        }
    }

    #[test]
    fn tree_shape(t in table(), u in measure(), k in tree_type()) {
        let g = build_tree(&t, k, u).unwrap();
        prop_assert_eq!(g.path_rows(g.root()), t.n_rows());
        prop_assert!(realizable_count(&t, &g) <= g.len());
        for id in 0..g.len() {
            for c in g.children(id) {
                prop_assert!(c > id);
                prop_assert!(g.path_rows(c) <= g.path_rows(id));
            }
            match g.label(id) {
                NodeLabel::Attribute(_) => prop_assert!(k.uses_attributes()),
                NodeLabel::Hypothesis(h) => {
                    prop_assert!(k.uses_hypotheses());
                    if k.proper_only() {
                        prop_assert!(t.find_row(h).is_some());
                    }
                }
                NodeLabel::Terminal(_) => {}
            }
        }
        if k == TreeType::new(1).unwrap() {
            prop_assert!(depth(&g) <= t.n_attributes());
        }
    }

    #[test]
    fn rule_statistics_bounds(t in table(), u in measure(), k in tree_type()) {
        let g = build_tree(&t, k, u).unwrap();
        let set = derive_rules(&t, &g).unwrap();
        let paths = complete_paths(&t, &g).unwrap();
        prop_assert_eq!(paths.len(), set.rules.len());
        for (p, r) in paths.iter().zip(&set.rules) {
            prop_assert_eq!(&reduce_system(&p.edges).unwrap(), &r.premise);
            prop_assert_eq!(p.subtable.len(), r.coverage);
            prop_assert!(r.coverage >= 1);
            let filtered = t.full().apply(&r.premise).unwrap();
            prop_assert_eq!(filtered.rows(), p.subtable.rows());
        }
        for row in 0..t.n_rows() {
            prop_assert!(set.stats.row_coverage[row] >= 1 && set.stats.row_coverage[row] <= t.n_rows());
            prop_assert!(set.stats.row_length[row] <= t.n_attributes());
        }
    }

    #[test]
    fn selected_query_is_no_worse_than_best_attribute(t in table(), u in measure()) {
        let theta = t.full();
        prop_assume!(!theta.is_degenerate());
        let (_, attr) = best_attribute(&theta, u).unwrap();
        for k in [1u8, 3, 5] {
            let (q, imp) = select_query(&theta, u, TreeType::new(k).unwrap()).unwrap();
            prop_assert!(imp <= attr);
            prop_assert_eq!(impurity(&q, &theta, u).unwrap(), imp);
        }
        for k in [2u8, 4] {
            let (q, imp) = select_query(&theta, u, TreeType::new(k).unwrap()).unwrap();
            prop_assert!(matches!(q, Query::Hypothesis(_)));
            prop_assert_eq!(impurity(&q, &theta, u).unwrap(), imp);
        }
    }

    #[test]
    fn answers_partition_for_attributes(t in table(), attr in 0usize..4) {
        prop_assume!(attr < t.n_attributes());
        let theta = t.full();
        let mut total = 0;
        for a in answers(&Query::Attribute(attr), &t).unwrap() {
            total += theta.apply(&a.system()).unwrap().len();
        }
        prop_assert_eq!(total, t.n_rows());
    }
}
