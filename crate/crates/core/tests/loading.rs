use std::io::Write;

use hyptree::harness::{load_table, parse_sources, DecisionColumn, TableSource};
use hyptree::Error;

fn write(dir: &tempfile::TempDir, name: &str, bytes: &[u8]) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::File::create(&path).unwrap().write_all(bytes).unwrap();
    path
}

#[test]
fn hayes_roth_fixture() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/hayes-roth.csv");
    let t = load_table(&path, &DecisionColumn::default()).unwrap();
    assert_eq!(t.n_attributes(), 4);
    assert_eq!(t.n_rows(), 69);
    assert_eq!(t.decision_set().len(), 3);
}

#[test]
fn file_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = DecisionColumn::default();
    let empty = write(&dir, "empty.csv", b"");
    assert!(matches!(load_table(&empty, &d), Err(Error::Data(_))));
    let binary = write(&dir, "bin.csv", b"a,decision\n\xc3\x28,1\n");
    let err = load_table(&binary, &d).unwrap_err();
    assert!(err.to_string().contains("UTF-8"), "{err}");
    let ragged = write(&dir, "ragged.csv", b"a,b,decision\n1,2,3\n1,2\n");
    let err = load_table(&ragged, &d).unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    assert!(matches!(
        load_table(&dir.path().join("missing.csv"), &d),
        Err(Error::Io(_))
    ));
}

#[test]
fn merged_rows_keep_invariants() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "t.csv",
        b"a,b,decision\nx,1,p\nx,1,q\nx,1,q\ny,1,p\ny,2,p\nx,1,p\nx,1,p\n",
    );
    let t = load_table(&path, &DecisionColumn::default()).unwrap();
    assert_eq!(t.n_rows(), 3);
    assert_eq!(t.decision(0), 0);
    assert!(t.n_rows() <= 7);
}

#[test]
fn directory_sources_are_sorted() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "b.csv", b"a,decision\n1,1\n");
    write(&dir, "a.csv", b"a,decision\n1,1\n");
    write(&dir, "notes.txt", b"");
    let sources = parse_sources(dir.path().to_str().unwrap()).unwrap();
    let labels: Vec<String> = sources.iter().map(TableSource::label).collect();
    assert_eq!(labels, ["a", "b"]);
}
