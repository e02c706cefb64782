#include <stdio.h>
#include <string.h>
#include "rookmonoid.h"

int main(void) {
    RmPoset *p = NULL;
    if (rm_poset_build("rook:3", &p) != RM_STATUS_OK) {
        fprintf(stderr, "build: %s\n", rm_last_error_message());
        return 1;
    }
    size_t len = 0;
    rm_poset_len(p, &len);
    uint8_t from[3] = {0, 1, 0}, to[3] = {3, 1, 2};
    size_t x = 0, y = 0, n = 0;
    rm_poset_index_of(p, from, 3, &x);
    rm_poset_index_of(p, to, 3, &y);
    size_t vertices[7];
    RmLabel labels[6];
    if (rm_poset_lex_first_chain(p, x, y, vertices, labels, 6, &n) != RM_STATUS_OK) {
        fprintf(stderr, "chain: %s\n", rm_last_error_message());
        return 1;
    }
    printf("%zu", len);
    for (size_t i = 0; i < n; i++) {
        printf(" (%u,%u)", labels[i].first, labels[i].second);
    }
    printf("\n");
    if (rm_poset_rank(p, len, &(uint32_t){0}) != RM_STATUS_INDEX_OUT_OF_RANGE) {
        return 1;
    }
    rm_poset_free(p);
    return 0;
}
