#include <stdio.h>
#include <stdlib.h>

#include "cswen.h"

int main(void) {
    CswenSolver *s = NULL;
    if (cswen_solver_new("sod", 2, 100, 0, CSWEN_LIMITER_CSWEN, &s) != CSWEN_STATUS_OK) {
        char msg[256];
        cswen_last_error_message(msg, sizeof msg);
        fprintf(stderr, "new: %s\n", msg);
        return 1;
    }
    if (cswen_solver_run(s, -1.0) != CSWEN_STATUS_OK) return 2;
    size_t cells = 0, vars = 0;
    cswen_solver_size(s, &cells, &vars);
    double *rho = malloc(cells * sizeof *rho);
    if (cswen_solver_cell_averages(s, 0, rho, cells) != CSWEN_STATUS_OK) return 3;
    double t = 0.0;
    cswen_solver_time(s, &t);
    printf("%zu %zu %.6f %.6f %.6f\n", cells, vars, t, rho[0], rho[cells - 1]);
    free(rho);
    cswen_solver_free(s);
    return cswen_solver_run(NULL, 1.0) == CSWEN_STATUS_NULL_POINTER ? 0 : 4;
}
