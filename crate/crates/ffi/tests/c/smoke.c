#include <stdio.h>
#include <string.h>

#include "xisp.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    const uint64_t idx[] = {3, 4, 5};
    const char *vals[] = {"1", "1", "1"};
    XispVector *v = NULL;
    CHECK(xisp_vector_new(idx, vals, 3, &v) == XISP_STATUS_OK);
    CHECK(xisp_vector_support_size(v) == 3);

    char *t = NULL;
    CHECK(xisp_tnorm(v, &t) == XISP_STATUS_OK);
    CHECK(strcmp(t, "3/2") == 0);
    xisp_string_free(t);

    char *cert = NULL;
    CHECK(xisp_norm_certificate(v, NULL, XISP_MODE_SCALED, 4, 4, 16, &cert) == XISP_STATUS_OK);
    CHECK(strstr(cert, "\"upper\":\"3/2\"") != NULL);
    xisp_string_free(cert);
    xisp_vector_free(v);

    const uint64_t set[] = {2, 3, 4, 5, 6, 7};
    bool member = false;
    CHECK(xisp_schreier_member(set, 6, 2, &member) == XISP_STATUS_OK && member);
    CHECK(xisp_schreier_member(set, 6, 1, &member) == XISP_STATUS_OK && !member);

    char *scc = NULL;
    XispStatus s = xisp_scc(3, "1/4", 1, 1, &scc);
    CHECK(s == XISP_STATUS_INFEASIBLE && scc == NULL);
    CHECK(strcmp(xisp_status_name(s), "infeasible-at-budget") == 0);
    CHECK(strncmp(xisp_last_error(), "infeasible-at-budget", 20) == 0);

    XispVector *bad = NULL;
    CHECK(xisp_vector_from_json("{\"entries\": [[\"0\", \"1\"]]}", &bad) == XISP_STATUS_MALFORMED_INPUT);
    CHECK(xisp_tnorm(NULL, &t) == XISP_STATUS_NULL_POINTER);

    XispRegistry *r = NULL;
    CHECK(xisp_registry_new(XISP_MODE_SCALED, &r) == XISP_STATUS_OK);
    char *pair = NULL;
    CHECK(xisp_build_exact_pair(r, 2, 1, 2, &pair) == XISP_STATUS_OK);
    CHECK(strstr(pair, "\"x\"") != NULL);
    xisp_string_free(pair);
    xisp_registry_free(r);

    puts("ok");
    return 0;
}
