// A user-defined coefficient function: phi(n) = gamma(n + 2) / gamma(2)
// describes f(x) = (1 + x)^(-2), whose Mellin transform is Gamma(nu) Gamma(2 - nu).

#include <cstdio>

#include "ramanujan/ramanujan.hpp"

int main() {
    using namespace ramanujan;
    PhiFunction phi = phi_from_expression("gamma(n+2)/gamma(2)");
    auto f = [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); };

    for (double nu : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        RmtResult r = rmt(phi, nu);
        if (r.status != RmtStatus::finite) {
            std::printf("nu = %.2f  %s (%s)\n", nu, to_string(r.status), r.detail.c_str());
            continue;
        }
        quad::QuadResult q = quad::mellin_quad(f, nu, 1.0, 1e-10);
        std::printf("nu = %.2f  closed form %.15f  quadrature %.15f\n", nu, r.value, q.value);
    }
    return 0;
}
