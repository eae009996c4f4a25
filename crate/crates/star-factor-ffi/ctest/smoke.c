#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "star_factor.h"

int main(void) {
    SfGraph *g = sf_graph_random_min_degree(200, 12, 7);
    assert(g != NULL);
    assert(sf_graph_min_degree(g) >= 12);

    SfPacking *p = NULL;
    char *report = NULL;
    SfStatus st = sf_solve(g, 12, 5, false, &p, &report);
    assert(st == SF_OK);
    assert(p != NULL);
    assert(sf_packing_min_star_size(p) >= 1);
    assert(sf_verify(g, p, 1, true) == SF_OK);
    assert(strstr(report, "achieved_ell") != NULL);
    printf("stars=%zu min=%zu\n", sf_packing_star_count(p), sf_packing_min_star_size(p));

    size_t leaves[512];
    size_t k = sf_packing_star_leaves(p, 0, leaves, 512);
    assert(k == sf_packing_star_size(p, 0));

    size_t ell = 0;
    bool isolated = false;
    SfGraph *small = sf_graph_lower_bound(1, 4, 0);
    assert(sf_oracle_max_factor_size(small, 16, &ell, &isolated) == SF_OK);
    assert(ell == 1 && !isolated);

    sf_string_free(report);
    sf_packing_free(p);
    sf_graph_free(g);
    sf_graph_free(small);
    puts("c smoke ok");
    return 0;
}
