#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramanujan/phi.hpp"
#include "ramanujan/specfun.hpp"

namespace ramanujan {

class MalformedPhi : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    double truncation_estimate = 0.0;
    bool converged = false;
};

inline constexpr int default_series_max_terms = 400;

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sums phi(n) (-1)^n / n! x^(m n). Term magnitudes are formed in log space.
/// Stops once two consecutive terms fall below tol * |partial sum|.
/// Throws MalformedPhi if phi has a pole at a non-negative integer.
inline SeriesResult eval_series(const PhiFunction& phi, int m, double x, double tol,
                                int max_terms = default_series_max_terms, bool compensated = true) {
    if (m < 1) throw std::invalid_argument("eval_series: m must be >= 1");
    if (!(x >= 0.0)) throw std::invalid_argument("eval_series: x must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("eval_series: tol must be positive");
    if (max_terms < 2) throw std::invalid_argument("eval_series: max_terms must be >= 2");

    SeriesResult res;
    if (x == 0.0) {
        res.value = phi.phi_at_zero();
        res.terms_used = 1;
        res.converged = true;
        return res;
    }
    const double log_x = std::log(x);
    CompensatedSum comp;
    double naive = 0.0;
    int small_run = 0;
    double last_two = 0.0, last = 0.0;
    for (int n = 0; n < max_terms; ++n) {
        LogPhi l = phi.log_abs(static_cast<double>(n));
        if (l.status != EvalStatus::ok)
            throw MalformedPhi("phi '" + phi.name() + "' is not finite at n = " + std::to_string(n));
        double log_mag = l.log_abs - specfun::log_gamma(n + 1.0) + m * n * log_x;
        double term = std::exp(log_mag) * l.sign * (n % 2 == 0 ? 1.0 : -1.0);
        if (l.log_abs == -std::numeric_limits<double>::infinity()) term = 0.0;
        comp.add(term);
        naive += term;
        res.terms_used = n + 1;
        last_two = last;
        last = std::abs(term);
        double partial = compensated ? comp.value() : naive;
        if (!std::isfinite(partial)) break;
        if (std::abs(term) < tol * std::abs(partial)) {
            if (++small_run >= 2) {
                res.value = partial;
                res.truncation_estimate = last + last_two;
                res.converged = res.truncation_estimate <= tol * std::max(1.0, std::abs(partial));
                return res;
            }
        } else {
            small_run = 0;
        }
    }
    res.value = compensated ? comp.value() : naive;
    res.truncation_estimate = last + last_two;
    res.converged = false;
    return res;
}

struct ConsistencyRecord {
    double x = 0.0;
    double series_value = 0.0;
    double direct_value = 0.0;
    double rel_diff = 0.0;
    bool pass = false;
};

/// Compares the series of `entry` against its direct evaluator on `x_grid`.
inline std::vector<ConsistencyRecord> series_consistency_check(const CatalogEntry& entry,
                                                               std::span<const double> x_grid, double tol) {
    std::vector<ConsistencyRecord> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        ConsistencyRecord rec;
        rec.x = x;
        SeriesResult s = eval_series(entry.phi, entry.m, x, 1e-3 * tol);
        rec.series_value = s.value;
        rec.direct_value = entry.f_direct(x);
        double scale = std::max(std::abs(rec.series_value), std::abs(rec.direct_value));
        rec.rel_diff = scale > 0.0 ? std::abs(rec.series_value - rec.direct_value) / scale : 0.0;
        bool tiny = std::abs(rec.series_value) <= 1e-14 && std::abs(rec.direct_value) <= 1e-14;
        rec.pass = s.converged && (rec.rel_diff <= tol || tiny);
        out.push_back(rec);
    }
    return out;
}

}  // namespace ramanujan
