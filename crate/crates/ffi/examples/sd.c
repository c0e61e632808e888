/* cc -Icrates/ffi/include crates/ffi/examples/sd.c -Ltarget/release -llatdeg_ffi -o sd */
#include <stdio.h>
#include "latdeg.h"

int main(int argc, char **argv) {
    const char *spec = argc > 1 ? argv[1] : "dihedral:8";
    LatdegGroup *g = NULL;
    if (latdeg_group_from_spec(spec, &g) != LATDEG_STATUS_OK) {
        fprintf(stderr, "error: %s\n", latdeg_last_error_message());
        return 1;
    }
    LatdegFraction sd, star;
    size_t order, host, kernel;
    latdeg_group_order(g, &order);
    latdeg_sd(g, &sd);
    latdeg_sd_star(g, &star, &host, &kernel);
    printf("%s: order %zu, sd = %llu/%llu, sd* = %llu/%llu (H%zu/N%zu)\n", spec, order,
           (unsigned long long)sd.num, (unsigned long long)sd.den,
           (unsigned long long)star.num, (unsigned long long)star.den, host, kernel);
    latdeg_group_free(g);
    return 0;
}
