//! Reading decision tables from comma-separated text.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{Error, Result};
use crate::table::DecisionTable;

/// Which column holds the decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionColumn {
    Named(String),
    Last,
}

impl Default for DecisionColumn {
    fn default() -> Self {
        DecisionColumn::Named("decision".to_string())
    }
}

impl DecisionColumn {
    /// `last` selects the final column; anything else is a column name.
    pub fn parse(s: &str) -> Self {
        match s.trim() {
            "last" => DecisionColumn::Last,
            name => DecisionColumn::Named(name.to_string()),
        }
    }
}

/// Dictionary encoder assigning codes in order of first appearance.
#[derive(Debug, Default)]
struct Dictionary {
    codes: HashMap<String, u32>,
}

impl Dictionary {
    fn encode(&mut self, s: &str) -> u32 {
        let next = self.codes.len() as u32;
        *self.codes.entry(s.to_string()).or_insert(next)
    }
}

pub fn load_table(path: &Path, decision: &DecisionColumn) -> Result<DecisionTable> {
    let file = File::open(path).map_err(|e| {
        Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })?;
    parse_table(file, decision).map_err(|e| match e {
        Error::Data(msg) => Error::Data(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses a header line followed by one line per row. Values are encoded per
/// column in first-appearance order, and repeated attribute vectors become a
/// single row with their most common decision (smallest code on ties).
pub fn parse_table<R: Read>(reader: R, decision: &DecisionColumn) -> Result<DecisionTable> {
    let mut rdr = ReaderBuilder::new()
        .trim(Trim::All)
        .has_headers(true)
        .from_reader(reader);
    let header = rdr.headers().map_err(data_err)?.clone();
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(Error::Data("empty file".into()));
    }
    let dcol = match decision {
        DecisionColumn::Last => header.len() - 1,
        DecisionColumn::Named(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Data(format!("no decision column named '{name}'")))?,
    };
    if header.len() < 2 {
        return Err(Error::NoAttributes);
    }
    let names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != dcol)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut dicts: Vec<Dictionary> = (0..names.len()).map(|_| Dictionary::default()).collect();
    let mut decisions_dict = Dictionary::default();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut counts: Vec<Vec<usize>> = Vec::new();

    let mut record = StringRecord::new();
    while rdr.read_record(&mut record).map_err(data_err)? {
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(Error::Data(format!(
                "line {line}: expected {} fields, found {}",
                header.len(),
                record.len()
            )));
        }
        let mut values = Vec::with_capacity(names.len());
        let mut attr = 0;
        for (i, field) in record.iter().enumerate() {
            if i != dcol {
                values.push(dicts[attr].encode(field));
                attr += 1;
            }
        }
        let d = decisions_dict.encode(&record[dcol]) as usize;
        let slot = *index.entry(values.clone()).or_insert_with(|| {
            rows.push(values);
            counts.push(Vec::new());
            rows.len() - 1
        });
        let c = &mut counts[slot];
        if c.len() <= d {
            c.resize(d + 1, 0);
        }
        c[d] += 1;
    }
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let decisions = counts
        .iter()
        .map(|c| {
            let max = c.iter().copied().max().unwrap_or(0);
            c.iter().position(|&x| x == max).unwrap_or(0) as u32
        })
        .collect();
    DecisionTable::new(names, rows, decisions)
}

fn data_err(e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Utf8 { pos, .. } => Error::Data(format!(
            "invalid UTF-8 on line {}",
            pos.as_ref().map_or(0, |p| p.line())
        )),
        csv::ErrorKind::UnequalLengths { pos, expected_len, len } => Error::Data(format!(
            "line {}: expected {expected_len} fields, found {len}",
            pos.as_ref().map_or(0, |p| p.line())
        )),
        _ => Error::Data(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &[u8]) -> Result<DecisionTable> {
        parse_table(s, &DecisionColumn::default())
    }

    #[test]
    fn two_rows() {
        let t = parse(b"a,b,decision\nx,y,yes\nx,z,no\n").unwrap();
        assert_eq!(t.n_rows(), 2);
        assert_eq!(t.n_attributes(), 2);
        assert_eq!(t.row(1), &[0, 1]);
        assert_eq!(t.decisions(), &[0, 1]);
        assert_eq!(t.attribute_names(), &["a", "b"]);
    }

    #[test]
    fn duplicates_merge_to_majority() {
        let t = parse(b"p,q,decision\na,b,x\na,b,x\na,b,y\n").unwrap();
        assert_eq!(t.n_rows(), 1);
        assert_eq!(t.row(0), &[0, 0]);
        assert_eq!(t.decision(0), 0);
        // tie goes to the smaller code, i.e. the label seen first
        let t = parse(b"p,decision\na,y\nb,x\na,x\n").unwrap();
        assert_eq!(t.decision(0), 0);
    }

    #[test]
    fn decision_column_choice() {
        let t = parse_table(&b"cls,a\n1,u\n2,v\n"[..], &DecisionColumn::parse("cls")).unwrap();
        assert_eq!(t.attribute_names(), &["a"]);
        let t = parse_table(&b"a,b\n1,u\n2,v\n"[..], &DecisionColumn::Last).unwrap();
        assert_eq!(t.attribute_names(), &["a"]);
        assert!(matches!(parse(b"a,b\n1,2\n"), Err(Error::Data(_))));
    }

    #[test]
    fn whitespace_is_trimmed() {
        let t = parse(b"a , decision\n x , 1\nx,2\ny,1\n").unwrap();
        assert_eq!(t.n_rows(), 2);
        assert_eq!(t.attribute_names(), &["a"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse(b""), Err(Error::Data(_))));
        assert!(matches!(parse(b"a,decision\n"), Err(Error::EmptyTable)));
        assert!(matches!(parse(b"a,decision\n1,2\n1\n"), Err(Error::Data(_))));
        assert!(matches!(parse(b"a,decision\n\xff\xfe,1\n"), Err(Error::Data(_))));
        assert!(matches!(parse(b"decision\n1\n"), Err(Error::NoAttributes)));
    }
}
