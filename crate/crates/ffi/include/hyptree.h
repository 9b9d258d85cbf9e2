/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef HYPTREE_H
#define HYPTREE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HtMeasure {
  HT_MEASURE_ME = 0,
  HT_MEASURE_RME = 1,
  HT_MEASURE_ENT = 2,
  HT_MEASURE_GINI = 3,
  HT_MEASURE_R = 4,
} HtMeasure;

// Result of a call.
typedef enum HtStatus {
  HT_STATUS_OK = 0,
  HT_STATUS_NULL_POINTER = 1,
  HT_STATUS_INVALID_ARGUMENT = 2,
  HT_STATUS_DATA_ERROR = 3,
  HT_STATUS_BUDGET_EXCEEDED = 4,
  HT_STATUS_IO_ERROR = 5,
  HT_STATUS_INTERNAL = 6,
} HtStatus;

// A decision table.
typedef struct HtTable HtTable;

// A tree together with the table it was built from.
typedef struct HtTree HtTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *ht_last_error(void);

// Library version as a static string.
const char *ht_version(void);

// Loads a CSV table. `decision` names the decision column; NULL means
// "decision" and "last" selects the final column.
//
// # Safety
// `path` and `decision` must be NUL-terminated strings or NULL, and `out`
// must point to writable storage for a handle.
enum HtStatus ht_table_load_csv(const char *path, const char *decision, struct HtTable **out);

// Generated dataset: "balance-scale" or "tic-tac-toe".
//
// # Safety
// `name` must be a NUL-terminated string and `out` writable.
enum HtStatus ht_table_builtin(const char *name, struct HtTable **out);

// Table from row-major `values` (`n_rows * n_attributes` entries) and
// `decisions` (`n_rows` entries). Rows must be pairwise distinct.
//
// # Safety
// The arrays must hold at least the stated number of elements and `out`
// must be writable.
enum HtStatus ht_table_new(size_t n_attributes,
                           size_t n_rows,
                           const uint32_t *values,
                           const uint32_t *decisions,
                           struct HtTable **out);

// Number of rows, or 0 for NULL.
//
// # Safety
// `table` must be NULL or a live handle.
size_t ht_table_n_rows(const struct HtTable *table);

// Number of attributes, or 0 for NULL.
//
// # Safety
// `table` must be NULL or a live handle.
size_t ht_table_n_attributes(const struct HtTable *table);

// # Safety
// `table` must be NULL or a handle not yet freed.
void ht_table_free(struct HtTable *table);

// Builds the greedy tree of type `k` (1..5). A `node_budget` of 0 uses the
// library default. The tree keeps its own reference to the table.
//
// # Safety
// `table` must be a live handle and `out` writable.
enum HtStatus ht_tree_build(const struct HtTable *table,
                            uint8_t k,
                            enum HtMeasure measure,
                            size_t node_budget,
                            struct HtTree **out);

// # Safety
// `tree` must be a live handle and `out` writable.
enum HtStatus ht_tree_depth(const struct HtTree *tree, size_t *out);

// Number of realizable nodes.
//
// # Safety
// `tree` must be a live handle and `out` writable.
enum HtStatus ht_tree_realizable(const struct HtTree *tree, size_t *out);

// Total number of nodes.
//
// # Safety
// `tree` must be a live handle and `out` writable.
enum HtStatus ht_tree_node_count(const struct HtTree *tree, size_t *out);

// Mean shortest rule length and mean largest coverage over the rows.
//
// # Safety
// `tree` must be a live handle and both outputs writable.
enum HtStatus ht_tree_rule_stats(const struct HtTree *tree,
                                 double *avg_length,
                                 double *avg_coverage);

// Text form of the tree, one node per line. Release with `ht_string_free`.
//
// # Safety
// `tree` must be a live handle and `out` writable.
enum HtStatus ht_tree_serialize(const struct HtTree *tree, char **out);

// # Safety
// `tree` must be NULL or a handle not yet freed.
void ht_tree_free(struct HtTree *tree);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void ht_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPTREE_H */
