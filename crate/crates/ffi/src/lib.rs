//! C interface to the `hyptree` library.
//!
//! Tables and trees are opaque handles owned by the caller and released
//! with `ht_table_free` / `ht_tree_free`. Every fallible function returns an
//! `HtStatus`; on failure `ht_last_error` describes what went wrong on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::sync::Arc;

use hyptree::harness::{load_table, synth, DecisionColumn};
use hyptree::metrics::{depth, realizable_count};
use hyptree::rules::rule_stats;
use hyptree::{build_tree_with, BuildOptions, DecisionTable, DecisionTree, Error, Measure, TreeType};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DataError = 3,
    BudgetExceeded = 4,
    IoError = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtMeasure {
    Me = 0,
    Rme = 1,
    Ent = 2,
    Gini = 3,
    R = 4,
}

impl From<HtMeasure> for Measure {
    fn from(m: HtMeasure) -> Self {
        match m {
            HtMeasure::Me => Measure::Me,
            HtMeasure::Rme => Measure::Rme,
            HtMeasure::Ent => Measure::Ent,
            HtMeasure::Gini => Measure::Gini,
            HtMeasure::R => Measure::R,
        }
    }
}

/// A decision table.
pub struct HtTable {
    table: Arc<DecisionTable>,
}

/// A tree together with the table it was built from.
pub struct HtTree {
    table: Arc<DecisionTable>,
    tree: DecisionTree,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HtStatus {
    match e {
        Error::BudgetExceeded { .. } => HtStatus::BudgetExceeded,
        Error::Io(_) => HtStatus::IoError,
        Error::Spec(_)
        | Error::UnknownMeasure(_)
        | Error::TreeType(_)
        | Error::AttributeIndex { .. }
        | Error::HypothesisLength { .. } => HtStatus::InvalidArgument,
        _ => HtStatus::DataError,
    }
}

/// Runs `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (HtStatus, String)>) -> HtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HtStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            HtStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (HtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HtStatus, String) {
    (HtStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HtStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HtStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), (HtStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn tree_ref<'a>(tree: *const HtTree) -> Result<&'a HtTree, (HtStatus, String)> {
    tree.as_ref().ok_or_else(|| null("tree"))
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ht_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ht_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Loads a CSV table. `decision` names the decision column; NULL means
/// "decision" and "last" selects the final column.
///
/// # Safety
/// `path` and `decision` must be NUL-terminated strings or NULL, and `out`
/// must point to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn ht_table_load_csv(
    path: *const c_char,
    decision: *const c_char,
    out: *mut *mut HtTable,
) -> HtStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let column = if decision.is_null() {
            DecisionColumn::default()
        } else {
            DecisionColumn::parse(str_arg(decision, "decision")?)
        };
        let table = load_table(Path::new(path), &column).map_err(lib_err)?;
        let handle = Box::into_raw(Box::new(HtTable {
            table: Arc::new(table),
        }));
        put(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// Generated dataset: "balance-scale" or "tic-tac-toe".
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_table_builtin(name: *const c_char, out: *mut *mut HtTable) -> HtStatus {
    guard(|| {
        let table = synth::builtin(str_arg(name, "name")?).map_err(lib_err)?;
        let handle = Box::into_raw(Box::new(HtTable {
            table: Arc::new(table),
        }));
        put(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// Table from row-major `values` (`n_rows * n_attributes` entries) and
/// `decisions` (`n_rows` entries). Rows must be pairwise distinct.
///
/// # Safety
/// The arrays must hold at least the stated number of elements and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ht_table_new(
    n_attributes: usize,
    n_rows: usize,
    values: *const u32,
    decisions: *const u32,
    out: *mut *mut HtTable,
) -> HtStatus {
    guard(|| {
        if n_rows > 0 && (values.is_null() || decisions.is_null()) {
            return Err(null("values or decisions"));
        }
        let count = n_rows
            .checked_mul(n_attributes)
            .ok_or((HtStatus::InvalidArgument, "table too large".to_string()))?;
        let (values, decisions) = if n_rows == 0 {
            (&[][..], &[][..])
        } else {
            (
                std::slice::from_raw_parts(values, count),
                std::slice::from_raw_parts(decisions, n_rows),
            )
        };
        let rows = if n_attributes == 0 {
            vec![Vec::new(); n_rows]
        } else {
            values.chunks(n_attributes).map(<[u32]>::to_vec).collect()
        };
        let table = DecisionTable::with_default_names(n_attributes, rows, decisions.to_vec())
            .map_err(lib_err)?;
        let handle = Box::into_raw(Box::new(HtTable {
            table: Arc::new(table),
        }));
        put(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ht_table_n_rows(table: *const HtTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.n_rows())
}

/// Number of attributes, or 0 for NULL.
///
/// # Safety
/// `table` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ht_table_n_attributes(table: *const HtTable) -> usize {
    table.as_ref().map_or(0, |t| t.table.n_attributes())
}

/// # Safety
/// `table` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ht_table_free(table: *mut HtTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Builds the greedy tree of type `k` (1..5). A `node_budget` of 0 uses the
/// library default. The tree keeps its own reference to the table.
///
/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_build(
    table: *const HtTable,
    k: u8,
    measure: HtMeasure,
    node_budget: usize,
    out: *mut *mut HtTree,
) -> HtStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        let k = TreeType::new(k).map_err(lib_err)?;
        let mut options = BuildOptions::default();
        if node_budget > 0 {
            options.node_budget = node_budget;
        }
        let tree = build_tree_with(&table.table, k, measure.into(), &options).map_err(lib_err)?;
        let handle = Box::into_raw(Box::new(HtTree {
            table: Arc::clone(&table.table),
            tree,
        }));
        put(out, handle, "out").inspect_err(|_| drop(Box::from_raw(handle)))
    })
}

/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_depth(tree: *const HtTree, out: *mut usize) -> HtStatus {
    guard(|| put(out, depth(&tree_ref(tree)?.tree), "out"))
}

/// Number of realizable nodes.
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_realizable(tree: *const HtTree, out: *mut usize) -> HtStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        put(out, realizable_count(&t.table, &t.tree), "out")
    })
}

/// Total number of nodes.
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_node_count(tree: *const HtTree, out: *mut usize) -> HtStatus {
    guard(|| put(out, tree_ref(tree)?.tree.len(), "out"))
}

/// Mean shortest rule length and mean largest coverage over the rows.
///
/// # Safety
/// `tree` must be a live handle and both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_rule_stats(
    tree: *const HtTree,
    avg_length: *mut f64,
    avg_coverage: *mut f64,
) -> HtStatus {
    guard(|| {
        let t = tree_ref(tree)?;
        if avg_length.is_null() || avg_coverage.is_null() {
            return Err(null("output"));
        }
        let stats = rule_stats(&t.table, &t.tree).map_err(lib_err)?;
        put(avg_length, stats.avg_length, "avg_length")?;
        put(avg_coverage, stats.avg_coverage, "avg_coverage")
    })
}

/// Text form of the tree, one node per line. Release with `ht_string_free`.
///
/// # Safety
/// `tree` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_serialize(tree: *const HtTree, out: *mut *mut c_char) -> HtStatus {
    guard(|| {
        let text = tree_ref(tree)?.tree.serialize();
        let c = CString::new(text).map_err(|e| (HtStatus::Internal, e.to_string()))?;
        let raw = c.into_raw();
        put(out, raw, "out").inspect_err(|_| drop(CString::from_raw(raw)))
    })
}

/// # Safety
/// `tree` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ht_tree_free(tree: *mut HtTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ht_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
