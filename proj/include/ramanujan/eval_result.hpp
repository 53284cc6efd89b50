#pragma once

#include <cmath>
#include <string>

namespace ramanujan {

enum class EvalStatus { ok, pole, domain_error };

/// Outcome of evaluating a coefficient function or expression at one point.
/// A pole is a regular outcome (it signals a divergent integral), so it is
/// carried as data rather than thrown.
struct EvalResult {
    EvalStatus status = EvalStatus::ok;
    double value = 0.0;
    std::string message;

    static EvalResult ok(double v) { return {EvalStatus::ok, v, {}}; }
    static EvalResult pole(std::string why = "gamma pole") {
        return {EvalStatus::pole, std::nan(""), std::move(why)};
    }
    static EvalResult domain(std::string why) {
        return {EvalStatus::domain_error, std::nan(""), std::move(why)};
    }

    bool is_ok() const { return status == EvalStatus::ok; }
    bool is_pole() const { return status == EvalStatus::pole; }
};

}  // namespace ramanujan
