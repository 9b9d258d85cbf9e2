//! Datasets that can be generated exactly instead of downloaded.
//!
//! Both tables are enumerations of a closed domain, so they are produced
//! here row for row in the order of the public UCI files.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::harness::load::{parse_table, DecisionColumn};
use crate::table::DecisionTable;

pub const BUILTINS: [&str; 2] = ["balance-scale", "tic-tac-toe"];

pub fn builtin(name: &str) -> Result<DecisionTable> {
    let csv = builtin_csv(name)?;
    parse_table(csv.as_bytes(), &DecisionColumn::default())
}

/// The builtin table as text in the loader's format.
pub fn builtin_csv(name: &str) -> Result<String> {
    match name {
        "balance-scale" => Ok(balance_scale_csv()),
        "tic-tac-toe" => Ok(tic_tac_toe_csv()),
        other => Err(Error::Spec(format!(
            "unknown builtin dataset '{other}' (known: {})",
            BUILTINS.join(", ")
        ))),
    }
}

fn balance_scale_csv() -> String {
    let mut s = String::from("left-weight,left-distance,right-weight,right-distance,decision\n");
    for lw in 1..=5 {
        for ld in 1..=5 {
            for rw in 1..=5 {
                for rd in 1..=5 {
                    let (l, r) = (lw * ld, rw * rd);
                    let class = match l.cmp(&r) {
                        std::cmp::Ordering::Greater => "L",
                        std::cmp::Ordering::Equal => "B",
                        std::cmp::Ordering::Less => "R",
                    };
                    writeln!(s, "{lw},{ld},{rw},{rd},{class}").unwrap();
                }
            }
        }
    }
    s
}

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

// Cell symbols ordered so that boards sort the way the UCI file lists them.
const X: u8 = 0;
const O: u8 = 1;
const B: u8 = 2;

fn wins(board: &[u8; 9], p: u8) -> bool {
    LINES.iter().any(|l| l.iter().all(|&i| board[i] == p))
}

fn collect_endings(board: &mut [u8; 9], to_move: u8, out: &mut BTreeSet<[u8; 9]>) {
    if wins(board, X) || wins(board, O) || board.iter().all(|&c| c != B) {
        out.insert(*board);
        return;
    }
    for i in 0..9 {
        if board[i] == B {
            board[i] = to_move;
            collect_endings(board, if to_move == X { O } else { X }, out);
            board[i] = B;
        }
    }
}

fn tic_tac_toe_csv() -> String {
    let mut endings = BTreeSet::new();
    collect_endings(&mut [B; 9], X, &mut endings);
    let (pos, neg): (Vec<_>, Vec<_>) = endings.into_iter().partition(|b| wins(b, X));
    let mut s = String::from(
        "top-left,top-middle,top-right,middle-left,middle-middle,middle-right,\
         bottom-left,bottom-middle,bottom-right,decision\n",
    );
    for (boards, class) in [(pos, "positive"), (neg, "negative")] {
        for b in boards {
            for c in b {
                s.push_str(["x,", "o,", "b,"][c as usize]);
            }
            s.push_str(class);
            s.push('\n');
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balance_scale_shape() {
        let t = builtin("balance-scale").unwrap();
        assert_eq!(t.n_rows(), 625);
        assert_eq!(t.n_attributes(), 4);
        let balanced = t.full().count_decision(0);
        assert_eq!(balanced, 49);
        assert_eq!(t.full().count_decision(1), 288);
    }

    #[test]
    fn tic_tac_toe_shape() {
        let t = builtin("tic-tac-toe").unwrap();
        assert_eq!(t.n_rows(), 958);
        assert_eq!(t.n_attributes(), 9);
        assert_eq!(t.full().count_decision(0), 626);
        assert_eq!(t.row(0), &[0; 9]);
    }

    #[test]
    fn unknown_builtin() {
        assert!(builtin("iris").is_err());
    }
}
