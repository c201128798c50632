/* Compiled and run by the c_header integration test: exercises the C API
 * end to end against the values of the l1 example. */
#include <stdio.h>
#include <math.h>

#include "rhostar.h"

int main(void) {
    RhostarSpace *space = NULL;
    RhostarStatus status = rhostar_space_l1(3, &space);
    if (status != RHOSTAR_STATUS_OK) {
        fprintf(stderr, "space_l1: %d\n", (int)status);
        return 1;
    }
    if (rhostar_space_dim(space) != 3) {
        return 2;
    }

    const double x[3] = {1.0, 0.0, 0.0};
    const double y[3] = {1.0, 1.0, 1.0};
    double value = 0.0;

    if (rhostar_rho_star(space, x, y, 3, &value) != RHOSTAR_STATUS_OK || value != -3.0) {
        fprintf(stderr, "rho_star: %f\n", value);
        return 3;
    }
    if (rhostar_rho_minus(space, x, y, 3, &value) != RHOSTAR_STATUS_OK || value != -1.0) {
        return 4;
    }
    if (rhostar_rho_plus(space, x, y, 3, &value) != RHOSTAR_STATUS_OK || value != 3.0) {
        return 5;
    }

    bool holds = false;
    double residual = 0.0;
    status = rhostar_is_orthogonal(space, x, y, 3, RHOSTAR_FLAVOR_BIRKHOFF,
                                   1e-9, 1e-9, &holds, &residual, NULL);
    if (status != RHOSTAR_STATUS_OK || !holds) {
        return 6;
    }
    status = rhostar_is_orthogonal(space, x, y, 3, RHOSTAR_FLAVOR_RHO_STAR,
                                   1e-9, 1e-9, &holds, &residual, NULL);
    if (status != RHOSTAR_STATUS_OK || holds || residual != 3.0) {
        return 7;
    }

    double out_y[3];
    double r1 = 0.0, r2 = 0.0;
    status = rhostar_thalesian_decompose(space, x, 3, 1.0, 7, out_y, &r1, &r2, &holds);
    if (status != RHOSTAR_STATUS_OK || !holds || r1 > 1e-9 || r2 > 1e-9) {
        return 8;
    }

    /* error paths surface as status codes */
    if (rhostar_norm(NULL, x, 3, &value) != RHOSTAR_STATUS_NULL_POINTER) {
        return 9;
    }

    rhostar_space_free(space);
    printf("c-abi-ok\n");
    return 0;
}
