/* Minimal C client: builds the d = 4 covariant observable with zero set
 * {(0,1), (0,3)} and asks whether it determines pure states among pure
 * states.
 *
 *   cargo build -p tpic-ffi --release
 *   cc examples/decide.c -Iinclude -L../../target/release -ltpic_ffi -o decide
 */
#include <stdio.h>

#include "tpic.h"

int main(void) {
    size_t xs[] = {0, 0};
    size_t xis[] = {1, 3};
    TpicObservable *obs = NULL;
    TpicSubspace *ann = NULL;
    TpicVerdict verdict;
    char *witness = NULL;
    size_t dim = 0;

    if (tpic_covariant_from_zero_set(4, xs, xis, 2, 0.5, &obs) != TPIC_STATUS_OK ||
        tpic_observable_annihilator(obs, &ann) != TPIC_STATUS_OK ||
        tpic_subspace_dim(ann, &dim) != TPIC_STATUS_OK ||
        tpic_decide(ann, 1, 1, 1000, 42, &verdict, &witness) != TPIC_STATUS_OK) {
        fprintf(stderr, "error: %s\n", tpic_last_error());
        return 1;
    }
    printf("annihilator dimension %zu\n", dim);
    printf("(1,1): %s\n", verdict == TPIC_VERDICT_CERTIFIED_NO ? "refuted" : "not refuted");
    tpic_string_free(witness);
    tpic_subspace_free(ann);
    tpic_observable_free(obs);
    return 0;
}
