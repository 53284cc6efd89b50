#pragma once

// Coefficient functions phi(n) and the built-in catalog of test functions.
//
// A function with the expansion
//     f(x) = sum_n phi(n) (-1)^n / n! * (x^m)^n
// is represented by phi evaluated at arbitrary real n, which is what lets
// phi(-s) enter the closed-form Mellin value.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ramanujan/eval_result.hpp"
#include "ramanujan/expr.hpp"
#include "ramanujan/specfun.hpp"

namespace ramanujan {

class PhiError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownEntry : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Descriptive pole set of phi. Evaluation reports poles on its own; this
/// is metadata for listings.
struct PoleSet {
    enum class Kind { none, shifted_nonpositive_integers, explicit_list, unknown };
    Kind kind = Kind::none;
    /// Poles at n = -shift - j for j = 0, 1, 2, ...
    double shift = 0.0;
    std::vector<double> points;

    static PoleSet none() { return {}; }
    static PoleSet shifted(double c) { return {Kind::shifted_nonpositive_integers, c, {}}; }
    static PoleSet unknown() { return {Kind::unknown, 0.0, {}}; }

    std::string describe() const {
        switch (kind) {
            case Kind::none: return "none";
            case Kind::shifted_nonpositive_integers: {
                std::string c = expr::detail::format_number(shift);
                return "n = -" + c + " - j, j = 0, 1, 2, ...";
            }
            case Kind::explicit_list: {
                std::string s;
                for (double p : points) s += (s.empty() ? "" : ", ") + expr::detail::format_number(p);
                return s;
            }
            case Kind::unknown: break;
        }
        return "unknown";
    }
};

/// ln|phi(n)| with the sign of phi(n). A zero phi(n) has log_abs = -inf.
struct LogPhi {
    EvalStatus status = EvalStatus::ok;
    double log_abs = 0.0;
    int sign = 1;
};

class PhiFunction {
public:
    using Evaluator = std::function<EvalResult(double)>;
    using LogEvaluator = std::function<LogPhi(double)>;

    /// Throws PhiError when phi(0) is zero, a pole or undefined.
    PhiFunction(std::string name, Evaluator eval, PoleSet poles = PoleSet::unknown(),
                LogEvaluator log_eval = nullptr)
        : name_(std::move(name)), eval_(std::move(eval)), log_eval_(std::move(log_eval)),
          poles_(std::move(poles)) {
        if (!eval_) throw std::invalid_argument("PhiFunction: empty evaluator");
        EvalResult at_zero = eval_(0.0);
        if (at_zero.is_pole()) throw PhiError("phi '" + name_ + "' has a pole at n = 0");
        if (!at_zero.is_ok() || !std::isfinite(at_zero.value))
            throw PhiError("phi '" + name_ + "' is undefined at n = 0: " + at_zero.message);
        if (at_zero.value == 0.0) throw PhiError("phi '" + name_ + "' violates phi(0) != 0");
        phi_at_zero_ = at_zero.value;
    }

    const std::string& name() const { return name_; }
    double phi_at_zero() const { return phi_at_zero_; }
    const PoleSet& poles() const { return poles_; }
    const std::optional<expr::Ast>& ast() const { return ast_; }

    EvalResult operator()(double s) const { return eval_(s); }

    LogPhi log_abs(double s) const {
        if (log_eval_) return log_eval_(s);
        EvalResult r = eval_(s);
        if (!r.is_ok()) return {r.status, std::nan(""), 1};
        return {EvalStatus::ok, std::log(std::abs(r.value)), r.value < 0.0 ? -1 : 1};
    }

    /// phi_lambda(n) = lambda^n phi(n), i.e. f(x) -> f(lambda^(1/m) x).
    PhiFunction scaled(double lambda) const {
        if (!(lambda > 0.0)) throw std::invalid_argument("PhiFunction::scaled: lambda must be positive");
        Evaluator base = eval_;
        LogEvaluator base_log = log_eval_;
        double log_lambda = std::log(lambda);
        Evaluator ev = [base, lambda](double s) {
            EvalResult r = base(s);
            if (r.is_ok()) r.value *= std::pow(lambda, s);
            return r;
        };
        LogEvaluator lev = nullptr;
        if (base_log) {
            lev = [base_log, log_lambda](double s) {
                LogPhi r = base_log(s);
                if (r.status == EvalStatus::ok) r.log_abs += s * log_lambda;
                return r;
            };
        }
        return PhiFunction(name_ + "*" + expr::detail::format_number(lambda) + "^n", std::move(ev), poles_,
                           std::move(lev));
    }

    void attach_ast(expr::Ast ast) { ast_ = std::move(ast); }

private:
    std::string name_;
    Evaluator eval_;
    LogEvaluator log_eval_;
    PoleSet poles_;
    double phi_at_zero_ = 0.0;
    std::optional<expr::Ast> ast_;
};

inline EvalResult phi_eval(const PhiFunction& phi, double s) { return phi(s); }

/// Wraps a parsed expression in n as a coefficient function.
inline PhiFunction phi_from_expression(const expr::Ast& ast, std::string name = {}) {
    if (name.empty()) name = expr::format_ast(ast);
    PhiFunction phi(std::move(name), [ast](double s) { return expr::eval_ast(ast, s); }, PoleSet::unknown());
    phi.attach_ast(ast);
    return phi;
}

inline PhiFunction phi_from_expression(std::string_view text) {
    return phi_from_expression(expr::parse(text), std::string(text));
}

// ---------------------------------------------------------------------------
// Direct evaluators of f.

/// Bessel J0 via the ascending series for |x| <= 8 and the Hankel
/// asymptotic expansion beyond.
inline double bessel_j0(double x) {
    x = std::abs(x);
    if (x <= 8.0) {
        // sum (-1)^j (x^2/4)^j / (j!)^2, Neumaier-compensated
        double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0, comp = 0.0;
        for (int j = 1; j < 200; ++j) {
            term *= -q / (static_cast<double>(j) * j);
            double t = sum + term;
            comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum + comp;
    }
    // J0 = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4, with
    // P = sum_k (-1)^k a_{2k} / x^{2k}, Q = sum_k (-1)^k a_{2k+1} / x^{2k+1},
    // a_j = prod_{i=1..j} (2i-1)^2 / (j! 8^j). Truncated at the smallest term.
    double p = 1.0, q = 0.0;
    double a = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 1; j < 60; ++j) {
        double odd = 2.0 * j - 1.0;
        a *= odd * odd / (8.0 * j * x);
        if (a >= prev || a < 1e-17) break;
        prev = a;
        int phase = j % 4;  // signs: j=1 Q-, j=2 P-, j=3 Q+, j=4 P+
        switch (phase) {
            case 1: q -= a; break;
            case 2: p -= a; break;
            case 3: q += a; break;
            case 0: p += a; break;
        }
    }
    double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// ---------------------------------------------------------------------------
// Catalog.

enum class Parity { none, even };

/// Open interval of the effective exponent mu = nu + 1 - k for which the
/// Mellin integral converges. upper may be +inf.
struct Interval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();

    bool contains(double v) const { return v > lower && v < upper; }
};

struct CatalogEntry {
    std::string name;
    PhiFunction phi;
    int m = 1;
    std::function<double(double)> f_direct;
    Parity parity = Parity::none;
    /// Convergence interval in mu = nu + 1 - k.
    Interval nu_validity;
    /// Sub-interval of nu_validity used for quadrature checks.
    Interval check_range;
    /// Closed form of the Mellin integral (k = 1) as an expression in n = nu.
    std::optional<expr::Ast> expected_closed_form;
    bool oscillatory = false;
    std::optional<double> period_hint;
    /// Radius of convergence of the series in x (inf for entire f).
    double series_radius = std::numeric_limits<double>::infinity();
    std::string description;
    std::map<std::string, double> parameters{};
};

namespace detail {

inline LogPhi log_gamma_shifted(double s, double shift) {
    double arg = s + shift;
    if (specfun::is_gamma_pole(arg)) return {EvalStatus::pole, std::nan(""), 1};
    auto sl = specfun::signed_log_gamma(arg);
    return {EvalStatus::ok, sl.log_abs, sl.sign};
}

inline EvalResult from_log(const LogPhi& l) {
    if (l.status == EvalStatus::pole) return EvalResult::pole();
    if (l.status != EvalStatus::ok) return EvalResult::domain("log evaluation failed");
    return EvalResult::ok(l.sign * std::exp(l.log_abs));
}

inline PhiFunction constant_one() {
    return PhiFunction(
        "1", [](double) { return EvalResult::ok(1.0); }, PoleSet::none(),
        [](double) { return LogPhi{EvalStatus::ok, 0.0, 1}; });
}

/// phi(n) = Gamma(n + a) / Gamma(a)
inline PhiFunction pochhammer(double a, std::string name) {
    double log_norm = specfun::log_gamma(a);
    auto log_eval = [a, log_norm](double s) {
        LogPhi l = log_gamma_shifted(s, a);
        if (l.status == EvalStatus::ok) l.log_abs -= log_norm;
        return l;
    };
    auto eval = [a](double s) -> EvalResult {
        auto g = specfun::gamma(s + a);
        if (g.at_pole) return EvalResult::pole("gamma pole at " + expr::detail::format_number(s + a));
        return EvalResult::ok(g.value * specfun::reciprocal_gamma(a));
    };
    return PhiFunction(std::move(name), eval, PoleSet::shifted(a), log_eval);
}

/// phi(n) = Gamma(n + 1) / Gamma(2n + 1). Gamma(1 - s) and Gamma(1 - 2s)
/// share poles at positive integers s; those are reported as poles.
inline PhiFunction cos_phi() {
    // Duplication formula: Gamma(n+1)/Gamma(2n+1) = sqrt(pi) 4^(-n) / Gamma(n+1/2), entire in n.
    const double half_log_pi = 0.5 * std::log(std::numbers::pi);
    auto log_eval = [half_log_pi](double s) -> LogPhi {
        double arg = s + 0.5;
        if (specfun::is_gamma_pole(arg)) return {EvalStatus::ok, -std::numeric_limits<double>::infinity(), 1};
        auto sl = specfun::signed_log_gamma(arg);
        return {EvalStatus::ok, half_log_pi - s * std::log(4.0) - sl.log_abs, sl.sign};
    };
    auto eval = [log_eval](double s) -> EvalResult {
        // Direct ratio keeps integer n exact; it has no singularities for n > -1/2.
        if (s > -0.5 && s < 64.0) return EvalResult::ok(specfun::gamma(s + 1.0).value * specfun::reciprocal_gamma(2.0 * s + 1.0));
        if (std::abs(s) < 64.0)
            return EvalResult::ok(std::sqrt(std::numbers::pi) * std::pow(4.0, -s) * specfun::reciprocal_gamma(s + 0.5));
        LogPhi l = log_eval(s);
        return EvalResult::ok(l.sign * std::exp(l.log_abs));
    };
    return PhiFunction("gamma(n+1)/gamma(2*n+1)", eval, PoleSet::none(), log_eval);
}

/// phi(n) = 1 / (4^n Gamma(n + 1)); entire.
inline PhiFunction bessel_phi() {
    auto log_eval = [](double s) -> LogPhi {
        double arg = s + 1.0;
        if (specfun::is_gamma_pole(arg)) return {EvalStatus::ok, -std::numeric_limits<double>::infinity(), 1};
        auto sl = specfun::signed_log_gamma(arg);
        return {EvalStatus::ok, -s * std::log(4.0) - sl.log_abs, sl.sign};
    };
    auto eval = [](double s) {
        return EvalResult::ok(std::pow(4.0, -s) * specfun::reciprocal_gamma(s + 1.0));
    };
    return PhiFunction("1/(4^n*gamma(n+1))", eval, PoleSet::none(), log_eval);
}

inline expr::Ast closed_form(std::string_view text) { return expr::parse(text); }

}  // namespace detail

/// Default value of the algebraic_a parameter.
inline constexpr double default_algebraic_a = 1.5;

inline CatalogEntry make_algebraic_entry(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("algebraic_a: parameter a must be positive");
    std::string lit = expr::detail::format_number(a);
    CatalogEntry e{
        .name = "algebraic_a",
        .phi = detail::pochhammer(a, "gamma(" + lit + "+n)/gamma(" + lit + ")"),
        .m = 2,
        .f_direct = [a](double x) { return std::pow(1.0 + x * x, -a); },
        .parity = Parity::even,
        .nu_validity = {0.0, 2.0 * a},
        .check_range = {0.0, 2.0 * a},
        .expected_closed_form =
            detail::closed_form("gamma(n/2)*gamma(" + lit + "-n/2)/(2*gamma(" + lit + "))"),
        .series_radius = 1.0,
        .description = "(1+x^2)^(-a), a = " + lit,
        .parameters = {{"a", a}},
    };
    return e;
}

inline std::vector<CatalogEntry> make_builtin_catalog() {
    using detail::closed_form;
    const double inf = std::numeric_limits<double>::infinity();
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<CatalogEntry> entries;
    entries.push_back({
        .name = "exp",
        .phi = detail::constant_one(),
        .m = 1,
        .f_direct = [](double x) { return std::exp(-x); },
        .nu_validity = {0.0, inf},
        .check_range = {0.0, inf},
        .expected_closed_form = closed_form("gamma(n)"),
        .description = "e^(-x)",
    });
    entries.push_back({
        .name = "gauss",
        .phi = detail::constant_one(),
        .m = 2,
        .f_direct = [](double x) { return std::exp(-x * x); },
        .parity = Parity::even,
        .nu_validity = {0.0, inf},
        .check_range = {0.0, inf},
        .expected_closed_form = closed_form("gamma(n/2)/2"),
        .description = "e^(-x^2)",
    });
    entries.push_back({
        .name = "geometric",
        .phi = detail::pochhammer(1.0, "gamma(n+1)"),
        .m = 1,
        .f_direct = [](double x) { return 1.0 / (1.0 + x); },
        .nu_validity = {0.0, 1.0},
        .check_range = {0.0, 1.0},
        .expected_closed_form = closed_form("pi/sin(pi*n)"),
        .series_radius = 1.0,
        .description = "1/(1+x)",
    });
    entries.push_back({
        .name = "cauchy",
        .phi = detail::pochhammer(1.0, "gamma(n+1)"),
        .m = 2,
        .f_direct = [](double x) { return 1.0 / (1.0 + x * x); },
        .parity = Parity::even,
        .nu_validity = {0.0, 2.0},
        .check_range = {0.0, 2.0},
        .expected_closed_form = closed_form("gamma(n/2)*gamma(1-n/2)/2"),
        .series_radius = 1.0,
        .description = "1/(1+x^2)",
    });
    entries.push_back({
        .name = "cos",
        .phi = detail::cos_phi(),
        .m = 2,
        .f_direct = [](double x) { return std::cos(x); },
        .parity = Parity::even,
        .nu_validity = {0.0, 1.0},
        .check_range = {0.0, 1.0},
        .expected_closed_form = closed_form("gamma(n)*cos(pi*n/2)"),
        .oscillatory = true,
        .period_hint = two_pi,
        .description = "cos(x)",
    });
    entries.push_back({
        .name = "bessel_j0",
        .phi = detail::bessel_phi(),
        .m = 2,
        .f_direct = bessel_j0,
        .parity = Parity::even,
        .nu_validity = {0.0, 1.5},
        .check_range = {0.0, 0.5},
        .expected_closed_form = closed_form("2^(n-1)*gamma(n/2)/gamma(1-n/2)"),
        .oscillatory = true,
        .period_hint = two_pi,
        .description = "J0(x)",
    });
    entries.push_back(make_algebraic_entry(default_algebraic_a));
    return entries;
}

/// Immutable built-in catalog (algebraic_a at its default parameter).
inline const std::vector<CatalogEntry>& builtin_catalog() {
    static const std::vector<CatalogEntry> catalog = make_builtin_catalog();
    return catalog;
}

inline std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& e : builtin_catalog()) names.push_back(e.name);
    return names;
}

/// Looks up an entry by name. Parametrized entries read their parameters
/// from `params` (currently only algebraic_a's "a").
inline CatalogEntry catalog_lookup(std::string_view name, const std::map<std::string, double>& params = {}) {
    for (const auto& [key, value] : params) {
        if (key != "a") throw std::invalid_argument("unknown catalog parameter '" + key + "'");
        (void)value;
    }
    if (name == "algebraic_a") {
        auto it = params.find("a");
        return make_algebraic_entry(it == params.end() ? default_algebraic_a : it->second);
    }
    for (const auto& e : builtin_catalog())
        if (e.name == name) return e;
    std::string list;
    for (const auto& n : catalog_names()) list += (list.empty() ? "" : ", ") + n;
    throw UnknownEntry("unknown catalog entry '" + std::string(name) + "'; available: " + list);
}

}  // namespace ramanujan
