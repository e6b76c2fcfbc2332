#include <stdio.h>
#include <string.h>
#include "hlcluster.h"

int main(void) {
    int64_t xi[6] = {-3, -2, -3, -4, -5, -4};
    HlSeed *seed = NULL;
    if (hl_seed_from_xi(xi, 6, 2, &seed) != HL_STATUS_OK) return 1;
    if (hl_seed_mutate(seed, "1") != HL_STATUS_OK) return 2;
    if (hl_seed_mutate(seed, "1\xe2\x80\xb2") != HL_STATUS_FROZEN_VERTEX) return 3;
    char *err = hl_last_error();
    if (err == NULL) return 4;
    hl_string_free(err);
    char *label = NULL;
    if (hl_seed_label(seed, "1", &label) != HL_STATUS_OK) return 5;
    printf("%s\n", label);
    hl_string_free(label);
    int undone = 0;
    if (hl_seed_undo(seed, &undone) != HL_STATUS_OK || undone != 1) return 6;
    if (hl_seed_log_len(seed) != 0) return 7;
    hl_seed_free(seed);
    return 0;
}
