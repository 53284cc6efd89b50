#pragma once

// Quadrature for Mellin-type integrals int_0^inf x^p f(x) dx, p = nu - k.
//
//   [0, 1]    tanh-sinh; the x^p endpoint singularity needs no special case
//             because nodes are formed from complements and never hit 0.
//   [1, inf)  monotone tails: x = exp(u), u = exp(pi/2 sinh t), trapezoid in t.
//             oscillatory tails: per-half-period Gauss-Legendre integrals whose
//             partial sums are extrapolated with Wynn's epsilon algorithm.
//
// Every rule refines by halving the step and reports the difference between
// the last two levels as its error estimate.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ramanujan::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
    std::string method_trace;
};

struct QuadOptions {
    double rel_tol = 1e-9;
    int max_levels = 12;
    int min_levels = 3;
};

inline constexpr double default_smooth_tol = 1e-9;
inline constexpr double default_oscillatory_tol = 1e-6;
inline constexpr int max_half_periods = 200;
inline constexpr int max_epsilon_columns = 60;

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();

inline double logistic(double u) {
    if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
    double e = std::exp(u);
    return e / (1.0 + e);
}

struct Node {
    double x;
    double weight;  // dx/dt
    bool usable;
};

/// Trapezoidal rule in t over [t_lo, t_hi] for integrand g(x(t)) x'(t),
/// halving the step until two levels agree to rel_tol.
template <class G, class Map>
QuadResult de_trapezoid(G&& g, Map&& map, double t_lo, double t_hi, const QuadOptions& opt,
                        const char* label) {
    QuadResult res;
    double raw = 0.0, raw_abs = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    bool nonfinite = false;
    double h = 1.0;
    int level = 0;

    auto accumulate = [&](double t) {
        Node nd = map(t);
        if (!nd.usable || nd.weight == 0.0) return;
        double gx = g(nd.x);
        ++res.evaluations;
        if (gx == 0.0) return;
        double term = gx * nd.weight;
        if (!std::isfinite(term)) {
            nonfinite = true;
            return;
        }
        raw += term;
        raw_abs += std::abs(term);
    };

    for (level = 0; level <= opt.max_levels; ++level) {
        if (level == 0) {
            for (double t = std::ceil(t_lo); t <= t_hi; t += 1.0) accumulate(t);
        } else {
            h *= 0.5;
            double start = std::ceil((t_lo - h) / (2.0 * h)) * 2.0 * h + h;
            for (double t = start; t <= t_hi; t += 2.0 * h) accumulate(t);
        }
        double current = h * raw;
        double l1 = h * raw_abs;
        double floor_err = 16.0 * eps * l1;
        if (have_prev) {
            res.abs_error_estimate = std::max(std::abs(current - prev), floor_err);
            res.value = current;
            if (level >= opt.min_levels &&
                res.abs_error_estimate <= std::max(opt.rel_tol * std::abs(current), floor_err)) {
                res.converged = true;
                break;
            }
        } else {
            res.value = current;
            res.abs_error_estimate = std::abs(current);
        }
        prev = current;
        have_prev = true;
    }
    res.method_trace = std::string(label) + " levels=" + std::to_string(std::min(level, opt.max_levels));
    if (nonfinite) res.method_trace += " (non-finite nodes skipped)";
    return res;
}

}  // namespace detail

/// tanh-sinh quadrature on [a, b]. Endpoints are never evaluated, so
/// integrable endpoint singularities are allowed.
template <class G>
QuadResult tanh_sinh(G&& g, double a, double b, const QuadOptions& opt = {}) {
    if (!(b > a)) throw std::invalid_argument("tanh_sinh: requires a < b");
    const double width = b - a;
    auto map = [a, b, width](double t) {
        double z = std::numbers::pi * std::sinh(t);
        double lo = detail::logistic(z);   // (x - a) / width
        double hi = detail::logistic(-z);  // (b - x) / width
        double x = t <= 0.0 ? a + width * lo : b - width * hi;
        double w = width * std::numbers::pi * std::cosh(t) * lo * hi;
        bool usable = x > a && x < b && std::isfinite(w);
        return detail::Node{x, w, usable};
    };
    return detail::de_trapezoid(std::forward<G>(g), map, -6.5, 6.5, opt, "tanh-sinh");
}

/// Integral over [1, inf) of a non-oscillatory integrand via x = exp(u),
/// u = exp(pi/2 sinh t).
template <class G>
QuadResult exp_map_tail(G&& g, const QuadOptions& opt = {}) {
    constexpr double half_pi = 0.5 * std::numbers::pi;
    constexpr double u_max = 700.0;
    const double t_hi = std::asinh(std::log(u_max) / half_pi);
    auto map = [](double t) {
        double u = std::exp(half_pi * std::sinh(t));
        double x = std::exp(u);
        double w = x * u * half_pi * std::cosh(t);
        bool usable = x > 1.0 && std::isfinite(x) && std::isfinite(w);
        return detail::Node{x, w, usable};
    };
    return detail::de_trapezoid(std::forward<G>(g), map, -4.5, t_hi, opt, "exp-map");
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order) : nodes(order), weights(order) {
        for (int i = 0; i < (order + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= order; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = order * (z * p0 - p1) / (z * z - 1.0);
                double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            nodes[i] = -z;
            nodes[order - 1 - i] = z;
            weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    template <class G>
    double integrate(G& g, double a, double b) const {
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * g(mid + half * nodes[i]);
        return half * sum;
    }
};

inline const GaussLegendre& gauss_legendre_24() {
    static const GaussLegendre rule(24);
    return rule;
}

inline const GaussLegendre& gauss_legendre_12() {
    static const GaussLegendre rule(12);
    return rule;
}

/// Limit of a slowly converging sequence of partial sums via Wynn's epsilon
/// algorithm. Returns the even-column estimate that changed least from the
/// previous even column; breakdown (equal neighbours) ends the table.
inline double tail_extrapolate(std::span<const double> partials) {
    const std::size_t n = partials.size();
    if (n < 3) throw std::invalid_argument("tail_extrapolate: need at least 3 partial sums");
    std::vector<double> older(n + 1, 0.0);  // column k-2
    std::vector<double> prev(partials.begin(), partials.end());  // column k-1
    double best = partials.back();
    double last_even = partials.back();
    double best_change = std::numeric_limits<double>::infinity();
    const std::size_t columns = std::min<std::size_t>(n - 1, max_epsilon_columns);
    for (std::size_t k = 1; k <= columns; ++k) {
        std::vector<double> cur(prev.size() - 1);
        bool broken = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            double diff = prev[i + 1] - prev[i];
            if (diff == 0.0) {
                broken = true;
                break;
            }
            cur[i] = older[i + 1] + 1.0 / diff;
            if (!std::isfinite(cur[i])) {
                broken = true;
                break;
            }
        }
        if (broken) break;
        if (k % 2 == 0) {
            double estimate = cur.back();
            double change = std::abs(estimate - last_even);
            if (change <= best_change) {
                best_change = change;
                best = estimate;
            }
            last_even = estimate;
        }
        older = std::move(prev);
        prev = std::move(cur);
    }
    return best;
}

namespace detail {

/// int_start^inf g via half-period pieces and epsilon extrapolation.
template <class G>
QuadResult oscillatory_tail(G& g, double start, double half_period, double rel_tol) {
    QuadResult res;
    const auto& fine = gauss_legendre_24();
    const auto& coarse = gauss_legendre_12();
    std::vector<double> partials;
    partials.reserve(max_half_periods);
    double sum = 0.0;
    double piece_err = 0.0;
    std::vector<double> estimates;
    constexpr std::size_t window = 50;

    for (int j = 0; j < max_half_periods; ++j) {
        double a = start + j * half_period;
        double b = a + half_period;
        double hi = fine.integrate(g, a, b);
        double lo = coarse.integrate(g, a, b);
        res.evaluations += static_cast<long>(fine.nodes.size() + coarse.nodes.size());
        piece_err += std::abs(hi - lo);
        sum += hi;
        partials.push_back(sum);
        if (partials.size() < 6) continue;
        std::size_t first = partials.size() > window ? partials.size() - window : 0;
        estimates.push_back(tail_extrapolate(std::span<const double>(partials).subspan(first)));
        std::size_t e = estimates.size();
        if (e >= 3) {
            double d1 = std::abs(estimates[e - 1] - estimates[e - 2]);
            double d2 = std::abs(estimates[e - 2] - estimates[e - 3]);
            res.value = estimates[e - 1];
            res.abs_error_estimate = std::max(d1, d2) + piece_err;
            double scale = std::max(std::abs(res.value), 1e-300);
            if (res.abs_error_estimate <= rel_tol * scale) {
                res.converged = true;
                res.method_trace = "half-periods=" + std::to_string(j + 1) + " wynn-epsilon";
                return res;
            }
        }
    }
    if (!estimates.empty()) res.value = estimates.back();
    res.method_trace = "half-periods=" + std::to_string(max_half_periods) + " wynn-epsilon (not converged)";
    return res;
}

}  // namespace detail

/// int_0^inf x^(nu-k) f(x) dx.
///
/// Requires nu - k > -1. For oscillatory f the tail beyond x = 1 is split at
/// multiples of period_hint / 2, which must then be given.
template <class F>
QuadResult mellin_quad(F&& f, double nu, double k, double tol, bool oscillatory = false,
                       std::optional<double> period_hint = std::nullopt) {
    const double p = nu - k;
    if (!(p > -1.0))
        throw std::domain_error("mellin_quad: nu - k must exceed -1 for convergence at x = 0");
    if (!(tol > 0.0)) throw std::invalid_argument("mellin_quad: tol must be positive");
    if (oscillatory && !(period_hint && *period_hint > 0.0))
        throw std::invalid_argument("mellin_quad: oscillatory integrand needs a positive period hint");

    auto g = [&f, p](double x) {
        double fx = f(x);
        if (fx == 0.0) return 0.0;
        return p == 0.0 ? fx : std::pow(x, p) * fx;
    };
    QuadOptions opt;
    opt.rel_tol = tol;
    QuadResult head = tanh_sinh(g, 0.0, 1.0, opt);
    QuadResult tail = oscillatory ? detail::oscillatory_tail(g, 1.0, 0.5 * *period_hint, tol)
                                  : exp_map_tail(g, opt);

    QuadResult res;
    res.value = head.value + tail.value;
    res.abs_error_estimate = head.abs_error_estimate + tail.abs_error_estimate;
    res.evaluations = head.evaluations + tail.evaluations;
    res.converged = head.converged && tail.converged &&
                    res.abs_error_estimate <= tol * std::max(std::abs(head.value) + std::abs(tail.value),
                                                             std::abs(res.value));
    res.method_trace = "[0,1] " + head.method_trace + "; [1,inf) " + tail.method_trace;
    return res;
}

/// int_-inf^inf f(x) dx for even f, as twice the half-line integral.
template <class F>
QuadResult integrate_real_line(F&& f, double tol, bool oscillatory = false,
                               std::optional<double> period_hint = std::nullopt) {
    QuadResult half = mellin_quad(std::forward<F>(f), 1.0, 1.0, tol, oscillatory, period_hint);
    half.value *= 2.0;
    half.abs_error_estimate *= 2.0;
    half.method_trace = "2 x half-line: " + half.method_trace;
    return half;
}

struct DivergenceReport {
    std::vector<double> cutoffs;
    std::vector<double> values;
    std::vector<double> increments;
    /// Last increment ratio (NaN when undefined).
    double last_ratio = std::numeric_limits<double>::quiet_NaN();
    bool growing = false;
};

/// Finite-cutoff integrals int_0^T x^(nu-k) f(x) dx. The integral is reported
/// as growing when the last increment keeps the sign of the previous one and
/// is at least half of it in magnitude.
template <class F>
DivergenceReport divergence_probe(F&& f, double nu, double k, std::span<const double> cutoffs) {
    if (cutoffs.size() < 3) throw std::invalid_argument("divergence_probe: need at least 3 cutoffs");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > 0.0) || (i > 0 && !(cutoffs[i] > cutoffs[i - 1])))
            throw std::invalid_argument("divergence_probe: cutoffs must be positive and increasing");
    }
    const double p = nu - k;
    auto g = [&f, p](double x) {
        double fx = f(x);
        if (fx == 0.0) return 0.0;
        return p == 0.0 ? fx : std::pow(x, p) * fx;
    };
    // Substituting x = e^u keeps [1, T] well scaled for T up to many decades.
    auto g_log = [&g](double u) {
        double x = std::exp(u);
        return g(x) * x;
    };
    QuadOptions opt;
    opt.rel_tol = 1e-10;
    DivergenceReport rep;
    rep.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    double head_unit = p > -1.0 ? tanh_sinh(g, 0.0, 1.0, opt).value : std::numeric_limits<double>::infinity();
    for (double T : cutoffs) {
        double v = T <= 1.0 ? tanh_sinh(g, 0.0, T, opt).value
                            : head_unit + tanh_sinh(g_log, 0.0, std::log(T), opt).value;
        rep.values.push_back(v);
    }
    for (std::size_t i = 1; i < rep.values.size(); ++i) rep.increments.push_back(rep.values[i] - rep.values[i - 1]);
    const std::size_t n = rep.increments.size();
    double last = rep.increments[n - 1], before = rep.increments[n - 2];
    double scale = std::max(1.0, std::abs(rep.values.back()));
    if (before != 0.0) rep.last_ratio = last / before;
    rep.growing = std::abs(last) > 1e-9 * scale && before != 0.0 && rep.last_ratio >= 0.5;
    return rep;
}

}  // namespace ramanujan::quad
