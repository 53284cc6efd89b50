#pragma once

// Closed-form Mellin values from the coefficient function:
//
//   int_0^inf x^(nu-k) f(x) dx = (1/m) Gamma(s) phi(-s),   s = (nu + 1 - k) / m,
//
// for f(x) = sum phi(n) (-1)^n / n! x^(m n). The integral needs s > 0 to
// converge at the origin; a pole of phi(-s) marks a divergent integral.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ramanujan/expr.hpp"
#include "ramanujan/phi.hpp"
#include "ramanujan/specfun.hpp"

namespace ramanujan {

enum class RmtStatus { finite, divergent, invalid };

inline const char* to_string(RmtStatus s) {
    switch (s) {
        case RmtStatus::finite: return "finite";
        case RmtStatus::divergent: return "divergent";
        case RmtStatus::invalid: return "invalid";
    }
    return "?";
}

struct RmtQuery {
    double nu = 0.0;
    int m = 1;
    double k = 1.0;
};

struct RmtResult {
    RmtStatus status = RmtStatus::invalid;
    /// Meaningful only when status == finite.
    double value = 0.0;
    /// Gamma argument (nu + 1 - k) / m.
    double s = 0.0;
    std::string detail;
};

namespace detail {

inline std::string fmt(double v) { return expr::detail::format_number(v); }

/// Shared classification for a given Gamma argument s and prefactor.
inline RmtResult classify_at(const PhiFunction& phi, double s, double prefactor, double pole_tol) {
    RmtResult r;
    r.s = s;
    if (!(s > pole_tol)) {
        r.status = RmtStatus::invalid;
        r.detail = "s = (nu+1-k)/m = " + fmt(s) + " <= 0 (tolerance " + fmt(pole_tol) +
                   "): convergence at x = 0 requires nu > k - 1";
        return r;
    }
    EvalResult p = phi(-s);
    if (p.is_pole()) {
        r.status = RmtStatus::divergent;
        r.detail = "phi(-s) pole at s = " + fmt(s) + " (" + p.message + ")";
        return r;
    }
    if (!p.is_ok()) {
        r.status = RmtStatus::invalid;
        r.detail = "phi(-s) undefined at s = " + fmt(s) + ": " + p.message;
        return r;
    }
    specfun::GammaValue g = specfun::gamma(s, pole_tol);
    r.status = RmtStatus::finite;
    r.value = g.value * p.value / prefactor;
    r.detail = "finite";
    return r;
}

}  // namespace detail

/// int_0^inf x^(nu-1) f(x) dx = Gamma(nu) phi(-nu).
inline RmtResult rmt(const PhiFunction& phi, double nu,
                     double pole_tol = specfun::default_pole_tolerance) {
    return detail::classify_at(phi, nu, 1.0, pole_tol);
}

inline RmtResult rmt_generalized(const PhiFunction& phi, int m, double k, double nu,
                                 double pole_tol = specfun::default_pole_tolerance) {
    if (m < 1) throw std::invalid_argument("rmt_generalized: m must be >= 1");
    // Written as (nu - (k - 1)) / m so that k = 1, m = 1 yields s == nu exactly.
    double s = (nu - (k - 1.0)) / m;
    return detail::classify_at(phi, s, static_cast<double>(m), pole_tol);
}

inline RmtResult rmt_generalized(const PhiFunction& phi, const RmtQuery& q,
                                 double pole_tol = specfun::default_pole_tolerance) {
    return rmt_generalized(phi, q.m, q.k, q.nu, pole_tol);
}

/// int_-inf^inf f(x) dx = sqrt(pi) phi(-1/2) for even f given with m = 2.
/// Parity is the caller's responsibility.
inline RmtResult rmt_symmetric(const PhiFunction& phi) {
    RmtResult r;
    r.s = 0.5;
    EvalResult p = phi(-0.5);
    if (p.is_pole()) {
        r.status = RmtStatus::divergent;
        r.detail = "phi(-1/2) pole (" + p.message + ")";
        return r;
    }
    if (!p.is_ok()) {
        r.status = RmtStatus::invalid;
        r.detail = "phi(-1/2) undefined: " + p.message;
        return r;
    }
    r.status = RmtStatus::finite;
    r.value = std::sqrt(std::numbers::pi) * p.value;
    r.detail = "finite";
    return r;
}

struct Classification {
    RmtStatus status;
    std::string reason;
};

inline Classification classify(const PhiFunction& phi, int m, double k, double nu) {
    RmtResult r = rmt_generalized(phi, m, k, nu);
    return {r.status, r.detail};
}

}  // namespace ramanujan
