#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "soliton_spectra.h"

static int check(SsStatus s, const char *what) {
    if (s != SS_STATUS_OK) {
        char msg[256];
        ss_last_error_message(msg, sizeof msg);
        fprintf(stderr, "%s: status %d: %s\n", what, (int)s, msg);
        return 1;
    }
    return 0;
}

int main(void) {
    SsModel *model = NULL;
    SsProfile *profile = NULL;
    SsSpectrum *spectrum = NULL;
    if (check(ss_model_soler_power(1, 1.0, &model), "model")) return 1;
    if (check(ss_profile_solve(model, SS_EQUATION_NLS, 0.5, 20.0, 128, &profile), "profile")) return 1;

    double q = 0.0;
    if (check(ss_profile_charge(profile, &q, NULL), "charge")) return 1;
    if (fabs(q - 2.0) > 1e-8) {
        fprintf(stderr, "charge %.12f\n", q);
        return 1;
    }

    if (check(ss_spectrum_compute(profile, &spectrum), "spectrum")) return 1;
    size_t n = 0, count = 1;
    ss_spectrum_len(spectrum, &n);
    ss_spectrum_real_pairs(spectrum, &count, NULL);
    double *re = malloc(n * sizeof *re), *im = malloc(n * sizeof *im);
    if (ss_spectrum_eigenvalues(spectrum, re, im, n - 1) != SS_STATUS_BUFFER_TOO_SMALL) return 1;
    if (check(ss_spectrum_eigenvalues(spectrum, re, im, n), "eigenvalues")) return 1;

    SsStatus bad = ss_profile_solve(model, SS_EQUATION_NLS, 1.5, 20.0, 128, &profile);
    char msg[256];
    ss_last_error_message(msg, sizeof msg);

    printf("%s n=%zu real=%zu bad=%d msg=%s\n", ss_version(), n, count, (int)bad, msg);
    free(re);
    free(im);
    ss_spectrum_free(spectrum);
    ss_profile_free(profile);
    ss_model_free(model);
    return count == 0 && n == 256 && bad == SS_STATUS_INVALID_ARGUMENT ? 0 : 1;
}
