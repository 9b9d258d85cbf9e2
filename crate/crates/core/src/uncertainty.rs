//! Uncertainty measures over decision-class counts.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::table::SubtableRef;

/// One of the five supported uncertainty measures.
///
/// Every measure is nonnegative and vanishes exactly on degenerate tables
/// (empty, or a single decision). `Me` and `R` are integer valued and are
/// represented exactly as `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Measure {
    /// Misclassification error `N - N_mcd`.
    Me,
    /// Relative misclassification error `(N - N_mcd) / N`.
    Rme,
    /// Shannon entropy (base 2) of the decision distribution.
    Ent,
    /// Gini index `1 - sum p_d^2`.
    Gini,
    /// Number of unordered row pairs with different decisions.
    R,
}

impl Measure {
    pub const ALL: [Measure; 5] = [Measure::Me, Measure::Rme, Measure::Ent, Measure::Gini, Measure::R];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Me => "me",
            Measure::Rme => "rme",
            Measure::Ent => "ent",
            Measure::Gini => "gini",
            Measure::R => "r",
        }
    }

    pub fn evaluate(self, theta: &SubtableRef<'_>) -> f64 {
        self.of_counts(&theta.decision_counts())
    }

    /// Value of the measure for a table with the given per-decision row
    /// counts. Zero entries are ignored.
    pub fn of_counts(self, counts: &[usize]) -> f64 {
        let total: usize = counts.iter().sum();
        if total == 0 {
            return 0.0;
        }
        match self {
            Measure::Me => (total - max_count(counts)) as f64,
            Measure::Rme => (total - max_count(counts)) as f64 / total as f64,
            Measure::Ent => {
                let n = total as f64;
                let mut h = 0.0;
                for &c in counts.iter().filter(|&&c| c > 0) {
                    let p = c as f64 / n;
                    h -= p * (p.ln() / LN_2);
                }
                h
            }
            Measure::Gini => {
                let n = total as f64;
                let mut s = 0.0;
                for &c in counts.iter().filter(|&&c| c > 0) {
                    let p = c as f64 / n;
                    s += p * p;
                }
                1.0 - s
            }
            Measure::R => {
                let n = total as u128;
                let sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
                ((n * n - sq) / 2) as f64
            }
        }
    }
}

fn max_count(counts: &[usize]) -> usize {
    counts.iter().copied().max().unwrap_or(0)
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "me" => Ok(Measure::Me),
            "rme" => Ok(Measure::Rme),
            "ent" => Ok(Measure::Ent),
            "gini" => Ok(Measure::Gini),
            "r" | "R" => Ok(Measure::R),
            other => Err(Error::UnknownMeasure(other.to_string())),
        }
    }
}

/// Parses a comma-separated list such as `me,rme,ent,gini,r`.
pub fn parse_measures(list: &str) -> Result<Vec<Measure>, Error> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::DecisionTable;

    fn table_with(decisions: &[u32]) -> DecisionTable {
        let rows = (0..decisions.len() as u32).map(|i| vec![i]).collect();
        DecisionTable::with_default_names(1, rows, decisions.to_vec()).unwrap()
    }

    fn eval(m: Measure, decisions: &[u32]) -> f64 {
        let t = table_with(decisions);
        m.evaluate(&t.full())
    }

    #[test]
    fn misclassification() {
        assert_eq!(eval(Measure::Me, &[1, 1, 2]), 1.0);
        assert_eq!(eval(Measure::Me, &[4, 4, 4]), 0.0);
        assert_eq!(eval(Measure::Me, &[1, 2, 3, 4]), 3.0);
    }

    #[test]
    fn relative_misclassification() {
        assert_eq!(eval(Measure::Rme, &[1, 1, 2]), 1.0 / 3.0);
        assert_eq!(eval(Measure::Rme, &[]), 0.0);
        assert_eq!(eval(Measure::Rme, &[1, 2]), 0.5);
    }

    #[test]
    fn entropy() {
        assert_eq!(eval(Measure::Ent, &[1, 1, 2, 2]), 1.0);
        assert_eq!(eval(Measure::Ent, &[3, 3]), 0.0);
        // log2(3) - 2/3
        let expected = 3f64.log2() - 2.0 / 3.0;
        assert!((eval(Measure::Ent, &[1, 1, 2]) - expected).abs() < 1e-12);
        assert!((expected - 0.918_295_834_054_489_6).abs() < 1e-12);
    }

    #[test]
    fn gini() {
        assert_eq!(eval(Measure::Gini, &[1, 1, 2, 2]), 0.5);
        assert_eq!(eval(Measure::Gini, &[7]), 0.0);
        assert!((eval(Measure::Gini, &[1, 1, 2]) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn r_pairs() {
        assert_eq!(eval(Measure::R, &[1, 1, 2, 2]), 4.0);
        assert_eq!(eval(Measure::R, &[5, 5]), 0.0);
        assert_eq!(eval(Measure::R, &[1, 2, 3]), 3.0);
    }

    #[test]
    fn zero_on_degenerate_is_positive_zero() {
        for m in Measure::ALL {
            let v = eval(m, &[2, 2, 2]);
            assert_eq!(v.to_bits(), 0f64.to_bits(), "{m}");
            assert_eq!(eval(m, &[]).to_bits(), 0f64.to_bits(), "{m}");
        }
    }

    #[test]
    fn names_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.name().parse::<Measure>().unwrap(), m);
        }
        assert_eq!("R".parse::<Measure>().unwrap(), Measure::R);
        assert!("chi2".parse::<Measure>().is_err());
        assert_eq!(parse_measures("me,gini").unwrap(), vec![Measure::Me, Measure::Gini]);
    }
}
