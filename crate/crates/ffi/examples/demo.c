/* Build a tree for a CSV table and print its depth and size.
 *
 *   cargo build --release -p hyptree-ffi
 *   cc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *      target/release/libhyptree_ffi.a -lpthread -ldl -lm -o demo
 *   ./demo data/cars.csv
 */
#include <stdio.h>

#include "hyptree.h"

int main(int argc, char **argv) {
    HtTable *table = NULL;
    HtStatus s = argc > 1 ? ht_table_load_csv(argv[1], NULL, &table)
                          : ht_table_builtin("balance-scale", &table);
    if (s != HT_STATUS_OK) {
        fprintf(stderr, "load failed (%d): %s\n", s, ht_last_error());
        return 1;
    }
    for (uint8_t k = 1; k <= 5; k++) {
        HtTree *tree = NULL;
        s = ht_tree_build(table, k, HT_MEASURE_ENT, 0, &tree);
        if (s != HT_STATUS_OK) {
            fprintf(stderr, "type %d: %s\n", k, ht_last_error());
            continue;
        }
        size_t depth = 0, realizable = 0;
        double len = 0, cov = 0;
        ht_tree_depth(tree, &depth);
        ht_tree_realizable(tree, &realizable);
        ht_tree_rule_stats(tree, &len, &cov);
        printf("type %d: h=%zu L=%zu l=%.2f c=%.2f\n", k, depth, realizable, len, cov);
        ht_tree_free(tree);
    }
    ht_table_free(table);
    return 0;
}
