// int_0^inf x^(-1/2) cos x dx = sqrt(pi/2), from phi(n) = n!/(2n)! with m = 2,
// compared against the oscillatory quadrature.

#include <cmath>
#include <cstdio>

#include "ramanujan/ramanujan.hpp"

int main() {
    using namespace ramanujan;
    const CatalogEntry cos_entry = catalog_lookup("cos");

    RmtResult closed = rmt_generalized(cos_entry.phi, cos_entry.m, 1.0, 0.5);
    quad::QuadResult numeric =
        quad::mellin_quad(cos_entry.f_direct, 0.5, 1.0, 1e-8, true, cos_entry.period_hint);

    std::printf("closed form : %.15f\n", closed.value);
    std::printf("quadrature  : %.15f  (+/- %.1e, %ld evaluations)\n", numeric.value, numeric.abs_error_estimate,
                numeric.evaluations);
    std::printf("sqrt(pi/2)  : %.15f\n", std::sqrt(std::numbers::pi / 2.0));
    return 0;
}
