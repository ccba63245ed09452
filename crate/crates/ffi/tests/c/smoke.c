#include <stdio.h>
#include <string.h>
#include "effbounds.h"

#define CHECK(x) do { if ((x) != EB_STATUS_OK) { fprintf(stderr, "%s: %s\n", #x, eb_last_error()); return 1; } } while (0)

int main(void) {
    EbField *k = NULL;
    EbSSpec *s = NULL;
    uint64_t primes[] = {2, 3};
    uint32_t d;
    int64_t disc;
    uint64_t h;
    double lo, hi, best;
    char *json = NULL;

    CHECK(eb_field_new("Q(sqrt(-5))", &k));
    CHECK(eb_field_invariants(k, &d, &disc, &h));
    if (d != 2 || disc != -20 || h != 2) return 2;
    CHECK(eb_sspec_new(k, primes, 2, &s));
    CHECK(eb_sspec_regulator(s, &lo, &hi));
    if (!(lo <= hi && lo > 0)) return 3;
    CHECK(eb_bound_unit_eq(s, "1", "1", &json));
    if (strstr(json, "thmC") == NULL) return 4;
    eb_string_free(json);
    CHECK(eb_bound_unit_eq_best(s, "1", "1", &best));
    if (!(best > 0)) return 5;
    if (eb_field_new("Q(sqrt(12))", &k) != EB_STATUS_INVALID || k != NULL) return 6;
    eb_sspec_free(s);
    printf("ok %.6f\n", best);
    return 0;
}
