#include <stdio.h>
#include <stdlib.h>

#include "tvq.h"

static int fail(const char *what, TvqStatus s) {
    const char *msg = tvq_last_error_message();
    fprintf(stderr, "%s: status %d: %s\n", what, (int)s, msg ? msg : "(none)");
    return 1;
}

int main(int argc, char **argv) {
    const char *name = argc > 1 ? argv[1] : "RP3";
    unsigned r = argc > 2 ? (unsigned)atoi(argv[2]) : 6;

    TvqTriangulation *tri = NULL;
    TvqStatus s = tvq_triangulation_from_catalog(name, &tri);
    if (s != TVQ_STATUS_OK)
        return fail("catalog", s);

    char *h1 = NULL;
    tvq_triangulation_homology(tri, &h1);
    printf("%s H1 = %s\n", name, h1);
    tvq_string_free(h1);

    TvqReport *rep = NULL;
    s = tvq_compute(tri, r, TVQ_EVALUATION_STANDARD, 0, &rep);
    if (s != TVQ_STATUS_OK)
        return fail("compute", s);

    const char *names[] = {"TV_0", "TV_1", "TV_2", "TV"};
    for (int k = 0; k < 4; k++) {
        char *poly = NULL;
        double re, im;
        tvq_report_polynomial(rep, (TvqInvariant)k, &poly);
        tvq_report_value(rep, (TvqInvariant)k, &re, &im);
        printf("%s = %s = %.3f\n", names[k], poly, re);
        tvq_string_free(poly);
    }
    double star, im;
    tvq_report_value(rep, TVQ_INVARIANT_TV_STAR, &star, &im);
    printf("TV* = %.3f\n", star);

    tvq_report_free(rep);
    tvq_triangulation_free(tri);

    s = tvq_triangulation_from_text("tetrahedra 1\n", &tri);
    printf("open tetrahedron: status %d: %s\n", (int)s, tvq_last_error_message());
    return s == TVQ_STATUS_INVALID_TRIANGULATION ? 0 : 1;
}
