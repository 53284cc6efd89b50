#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "ramanujan/phi.hpp"
#include "ramanujan/quad.hpp"

using namespace ramanujan;
using namespace ramanujan::quad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double pi = std::numbers::pi;

std::vector<double> partial_sums(int n, double (*term)(int)) {
    std::vector<double> s;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) s.push_back(acc += term(j));
    return s;
}

}  // namespace

TEST_CASE("mellin_quad reference values", "[quad]") {
    QuadResult a = mellin_quad([](double x) { return std::exp(-x); }, 2.0, 1.0, 1e-10);
    CHECK(a.converged);
    CHECK_THAT(a.value, WithinAbs(1.0, 1e-10));

    QuadResult b = mellin_quad([](double x) { return 1.0 / (1.0 + x); }, 0.5, 1.0, 1e-9);
    CHECK(b.converged);
    CHECK_THAT(b.value, WithinAbs(pi, 1e-8));

    QuadResult c = mellin_quad([](double x) { return std::cos(x); }, 0.5, 1.0, 1e-7, true, 2.0 * pi);
    CHECK(c.converged);
    CHECK_THAT(c.value, WithinAbs(std::sqrt(pi / 2.0), 1e-6));
    CHECK(c.method_trace.find("wynn-epsilon") != std::string::npos);
}

TEST_CASE("mellin_quad preconditions", "[quad]") {
    auto f = [](double x) { return std::exp(-x); };
    CHECK_THROWS_AS(mellin_quad(f, 0.0, 1.0, 1e-8), std::domain_error);
    CHECK_THROWS_AS(mellin_quad(f, 1.0, 3.0, 1e-8), std::domain_error);
    CHECK_THROWS_AS(mellin_quad(f, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mellin_quad(f, 1.0, 1.0, 1e-8, true), std::invalid_argument);
}

TEST_CASE("integrate_real_line", "[quad]") {
    CHECK_THAT(integrate_real_line([](double x) { return std::exp(-x * x); }, 1e-10).value,
               WithinAbs(std::sqrt(pi), 1e-9));
    CHECK_THAT(integrate_real_line([](double x) { return 1.0 / (1.0 + x * x); }, 1e-10).value, WithinAbs(pi, 1e-9));
    CHECK_THAT(integrate_real_line([](double x) { return std::pow(1.0 + x * x, -1.5); }, 1e-10).value,
               WithinAbs(2.0, 1e-9));
    // int cos(x) / (1 + x^2) over R = pi / e, through the oscillatory tail.
    CHECK_THAT(integrate_real_line([](double x) { return std::cos(x) / (1.0 + x * x); }, 1e-8, true, 2.0 * pi).value,
               WithinRel(pi / std::numbers::e, 1e-7));
}

TEST_CASE("exactness on exp(-x^m)", "[quad][property]") {
    for (int m : {1, 2, 3}) {
        for (double nu : {0.3, 1.0, 2.5}) {
            auto f = [m](double x) { return std::exp(-std::pow(x, m)); };
            QuadResult q = mellin_quad(f, nu, 1.0, 1e-11);
            double expected = std::tgamma(nu / m) / m;
            INFO("m = " << m << " nu = " << nu);
            CHECK(q.converged);
            CHECK_THAT(q.value, WithinRel(expected, 1e-9));
        }
    }
}

TEST_CASE("integrable x^(-1/2) endpoint singularity", "[quad][property]") {
    // nu - k = -0.5 for several k.
    for (double k : {0.0, 1.0, 2.0}) {
        double nu = k - 0.5;
        QuadResult q = mellin_quad([](double x) { return std::exp(-x); }, nu, k, 1e-8);
        CHECK(q.converged);
        CHECK_THAT(q.value, WithinRel(std::sqrt(pi), 1e-8));
        QuadResult c = mellin_quad([](double x) { return 1.0 / (1.0 + x * x); }, nu, k, 1e-8);
        CHECK(c.converged);
        CHECK_THAT(c.value, WithinRel(pi / std::sqrt(2.0), 1e-8));
    }
    // A harsher one: x^(-0.9).
    QuadResult s = mellin_quad([](double x) { return std::exp(-x); }, 0.1, 1.0, 1e-9);
    CHECK(s.converged);
    CHECK_THAT(s.value, WithinRel(std::tgamma(0.1), 1e-9));
}

TEST_CASE("error estimates are honest on the catalog grid", "[quad][property]") {
    int total = 0, honest = 0;
    for (const auto& e : builtin_catalog()) {
        for (double mu = e.check_range.lower + 0.125; mu < std::min(e.check_range.upper, 4.0); mu += 0.125) {
            double tol = e.oscillatory ? 1e-7 : 1e-10;
            QuadResult q = mellin_quad(e.f_direct, mu, 1.0, tol, e.oscillatory, e.period_hint);
            double exact = expr::eval_ast(*e.expected_closed_form, mu).value;
            ++total;
            if (q.abs_error_estimate >= std::abs(q.value - exact)) ++honest;
        }
    }
    INFO(honest << " of " << total);
    CHECK(honest >= 0.95 * total);
}

TEST_CASE("tail_extrapolate", "[quad]") {
    auto log2 = partial_sums(20, [](int j) { return (j % 2 ? -1.0 : 1.0) / (j + 1); });
    CHECK_THAT(tail_extrapolate(log2), WithinAbs(std::log(2.0), 1e-6));

    auto leibniz = partial_sums(20, [](int j) { return 4.0 * (j % 2 ? -1.0 : 1.0) / (2 * j + 1); });
    CHECK_THAT(tail_extrapolate(leibniz), WithinAbs(pi, 1e-4));

    std::vector<double> constant(7, 2.5);
    CHECK(tail_extrapolate(constant) == 2.5);

    std::vector<double> geometric;
    double acc = 0.0;
    for (int j = 0; j < 10; ++j) geometric.push_back(acc += std::pow(0.5, j));
    CHECK_THAT(tail_extrapolate(geometric), WithinAbs(2.0, 1e-12));

    std::vector<double> too_short{1.0, 2.0};
    CHECK_THROWS_AS(tail_extrapolate(too_short), std::invalid_argument);
}

TEST_CASE("divergence_probe", "[quad]") {
    std::vector<double> cutoffs{10.0, 100.0, 1000.0};
    auto geo = [](double x) { return 1.0 / (1.0 + x); };

    DivergenceReport log_growth = divergence_probe(geo, 1.0, 1.0, cutoffs);
    CHECK(log_growth.growing);
    REQUIRE(log_growth.increments.size() == 2);
    // ln(1 + T) growth: increments ln(101/11) and ln(1001/101), both near ln 10.
    CHECK_THAT(log_growth.increments[0], WithinAbs(std::log(101.0 / 11.0), 1e-8));
    CHECK_THAT(log_growth.increments[1], WithinAbs(std::log(1001.0 / 101.0), 1e-8));
    CHECK_THAT(log_growth.increments[1], WithinAbs(std::log(10.0), 0.1));

    DivergenceReport sat = divergence_probe([](double x) { return std::exp(-x); }, 1.0, 1.0, cutoffs);
    CHECK_FALSE(sat.growing);
    CHECK_THAT(sat.values.back(), WithinAbs(1.0, 1e-9));

    // x / (1 + x) -> 1: increments ~ 90 and ~ 900.
    DivergenceReport linear = divergence_probe(geo, 2.0, 1.0, cutoffs);
    CHECK(linear.growing);
    CHECK_THAT(linear.values.back(), WithinAbs(1000.0 - std::log(1001.0), 1e-6));
    CHECK(linear.last_ratio > 9.0);

    std::vector<double> bad{10.0, 5.0, 100.0};
    CHECK_THROWS(divergence_probe(geo, 1.0, 1.0, bad));
}

TEST_CASE("tanh_sinh on finite intervals", "[quad]") {
    QuadResult r = tanh_sinh([](double x) { return std::log(x) / std::sqrt(x); }, 0.0, 1.0, {.rel_tol = 1e-12});
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinRel(-4.0, 1e-11));
    QuadResult w = tanh_sinh([](double x) { return std::exp(x); }, -1.0, 2.0, {.rel_tol = 1e-12});
    CHECK(w.converged);
    CHECK_THAT(w.value, WithinRel(std::exp(2.0) - std::exp(-1.0), 1e-12));
    CHECK_THROWS(tanh_sinh([](double x) { return x; }, 1.0, 1.0));
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly", "[quad]") {
    const auto& gl = gauss_legendre_24();
    auto p = [](double x) { return std::pow(x, 20) - 3.0 * std::pow(x, 7) + 1.0; };
    CHECK_THAT(gl.integrate(p, 0.0, 2.0), WithinRel(std::pow(2.0, 21) / 21.0 - 3.0 * 256.0 / 8.0 + 2.0, 1e-13));
    double wsum = 0.0;
    for (double w : gauss_legendre_12().weights) wsum += w;
    CHECK_THAT(wsum, WithinRel(2.0, 1e-14));
}
