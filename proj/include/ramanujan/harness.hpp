#pragma once

// Verification campaign: classify each (entry, nu, m, k) case with the
// closed form, then confirm finite values by quadrature and divergent ones
// by a cutoff-growth probe.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ramanujan/phi.hpp"
#include "ramanujan/quad.hpp"
#include "ramanujan/rmt.hpp"

namespace ramanujan::harness {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Outcome { pass, fail, divergent_confirmed, divergent_unconfirmed, skipped_invalid, quad_nonconverged };

inline constexpr std::array<Outcome, 6> all_outcomes = {
    Outcome::pass,           Outcome::fail,          Outcome::divergent_confirmed, Outcome::divergent_unconfirmed,
    Outcome::skipped_invalid, Outcome::quad_nonconverged};

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "PASS";
        case Outcome::fail: return "FAIL";
        case Outcome::divergent_confirmed: return "DIVERGENT_CONFIRMED";
        case Outcome::divergent_unconfirmed: return "DIVERGENT_UNCONFIRMED";
        case Outcome::skipped_invalid: return "SKIPPED_INVALID";
        case Outcome::quad_nonconverged: return "QUAD_NONCONVERGED";
    }
    return "?";
}

inline bool is_failure(Outcome o) {
    return o == Outcome::fail || o == Outcome::quad_nonconverged || o == Outcome::divergent_unconfirmed;
}

struct VerificationCase {
    std::string entry;
    double nu = 0.0;
    int m = 1;
    double k = 1.0;
    double tol = 1e-8;
};

struct VerificationRecord {
    VerificationCase vcase;
    RmtStatus rmt_status = RmtStatus::invalid;
    std::optional<double> rmt_value;
    std::optional<double> quad_value;
    std::optional<double> quad_err;
    std::optional<double> rel_diff;
    Outcome outcome = Outcome::skipped_invalid;
    std::string detail;
};

struct HarnessConfig {
    double tol_smooth = 1e-8;
    double tol_oscillatory = 1e-5;
    /// Quadrature is asked for tol * quad_tol_factor.
    double quad_tol_factor = 1e-2;
    double nu_step = 0.25;
    /// Upper end of the default grid in mu = nu + 1 - k for unbounded intervals.
    double nu_cap = 4.0;
    std::vector<double> k_list = {0.0, 1.0, 2.0};
    std::vector<double> probe_cutoffs = {10.0, 100.0, 1000.0};
    unsigned threads = 0;  // 0: hardware concurrency
    std::map<std::string, double> params;

    double default_tol(const CatalogEntry& e) const { return e.oscillatory ? tol_oscillatory : tol_smooth; }
};

// ---------------------------------------------------------------------------
// Formatting

/// 17 significant digits with '.' as separator, independent of locale.
inline std::string format_real(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

inline std::string format_short(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 10);
    return std::string(buf.data(), ptr);
}

inline double parse_real(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    const char* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw UsageError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

inline std::vector<double> parse_real_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        out.push_back(parse_real(item, what));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct NuRange {
    double first = 0.0;
    double last = 0.0;
    double step = 1.0;
};

/// Parses "a:b:step".
inline NuRange parse_nu_range(std::string_view text) {
    auto c1 = text.find(':');
    auto c2 = c1 == text.npos ? text.npos : text.find(':', c1 + 1);
    if (c1 == text.npos || c2 == text.npos) throw UsageError("nu grid must have the form a:b:step");
    NuRange r{parse_real(text.substr(0, c1), "nu grid"), parse_real(text.substr(c1 + 1, c2 - c1 - 1), "nu grid"),
              parse_real(text.substr(c2 + 1), "nu grid")};
    if (!(r.step > 0.0)) throw UsageError("nu grid step must be positive");
    if (!(r.first <= r.last)) throw UsageError("nu grid needs a <= b");
    return r;
}

/// Grid points a, a+step, ... up to b inclusive (within 1e-12).
inline std::vector<double> grid_points(const NuRange& r) {
    std::vector<double> pts;
    for (long i = 0;; ++i) {
        double v = r.first + static_cast<double>(i) * r.step;
        if (v > r.last + 1e-12) break;
        if (std::abs(v - r.last) <= 1e-12) v = r.last;
        pts.push_back(v);
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Grids

/// Cartesian product of entries x nu grid x m list x k list, keeping only
/// the m that each entry is defined with. An empty m list means "the
/// entry's own m". Throws UsageError on an empty result.
inline std::vector<VerificationCase> expand_grid(const std::vector<std::string>& entries, const NuRange& range,
                                                 const std::vector<int>& m_list, const std::vector<double>& k_list,
                                                 std::optional<double> tol, const HarnessConfig& cfg = {}) {
    if (!(range.step > 0.0) || !(range.first <= range.last)) throw UsageError("invalid nu grid");
    std::vector<VerificationCase> cases;
    const auto nus = grid_points(range);
    for (const auto& name : entries) {
        CatalogEntry e = [&] {
            try {
                return catalog_lookup(name, cfg.params);
            } catch (const UnknownEntry& ex) {
                throw UsageError(ex.what());
            }
        }();
        std::vector<int> ms = m_list.empty() ? std::vector<int>{e.m} : m_list;
        for (int m : ms) {
            if (m != e.m) continue;
            for (double k : k_list)
                for (double nu : nus) cases.push_back({name, nu, m, k, tol.value_or(cfg.default_tol(e))});
        }
    }
    if (cases.empty()) throw UsageError("empty verification grid (entry m does not match the requested m list?)");
    return cases;
}

/// Default campaign: for every k, nu runs over the entry's check range shifted
/// by k - 1 (mu = nu + 1 - k strictly inside the interval) at cfg.nu_step.
inline std::vector<VerificationCase> default_campaign(const std::vector<std::string>& entries,
                                                      const HarnessConfig& cfg,
                                                      std::optional<double> tol = std::nullopt) {
    if (!(cfg.nu_step > 0.0)) throw UsageError("nu_step must be positive");
    std::vector<VerificationCase> cases;
    for (const auto& name : entries) {
        CatalogEntry e = [&] {
            try {
                return catalog_lookup(name, cfg.params);
            } catch (const UnknownEntry& ex) {
                throw UsageError(ex.what());
            }
        }();
        for (double k : cfg.k_list) {
            for (long j = 1;; ++j) {
                double mu = e.check_range.lower + static_cast<double>(j) * cfg.nu_step;
                if (!(mu < e.check_range.upper - 1e-12) || mu > cfg.nu_cap + 1e-12) break;
                cases.push_back({name, mu + (k - 1.0), e.m, k, tol.value_or(cfg.default_tol(e))});
            }
        }
    }
    if (cases.empty()) throw UsageError("empty verification grid");
    return cases;
}

// ---------------------------------------------------------------------------
// Running

inline VerificationRecord verify_case(const VerificationCase& c, const CatalogEntry& e, const HarnessConfig& cfg) {
    VerificationRecord rec;
    rec.vcase = c;
    RmtResult r = rmt_generalized(e.phi, c.m, c.k, c.nu);
    // A finite value past the entry's convergence interval is only the analytic
    // continuation; the integral itself diverges at infinity.
    if (double mu = c.nu + 1.0 - c.k; r.status == RmtStatus::finite && mu >= e.nu_validity.upper) {
        r.status = RmtStatus::divergent;
        r.detail = "mu = nu + 1 - k = " + format_short(mu) + " outside convergence interval (" +
                   format_short(e.nu_validity.lower) + ", " + format_short(e.nu_validity.upper) +
                   "); continuation value " + format_short(r.value);
    }
    rec.rmt_status = r.status;
    rec.detail = r.detail;
    switch (r.status) {
        case RmtStatus::invalid:
            rec.outcome = Outcome::skipped_invalid;
            return rec;
        case RmtStatus::divergent: {
            auto rep = quad::divergence_probe(e.f_direct, c.nu, c.k, cfg.probe_cutoffs);
            rec.outcome = rep.growing ? Outcome::divergent_confirmed : Outcome::divergent_unconfirmed;
            rec.detail += rep.growing ? "; cutoff integrals keep growing" : "; cutoff integrals saturate";
            return rec;
        }
        case RmtStatus::finite:
            break;
    }
    rec.rmt_value = r.value;
    auto q = quad::mellin_quad(e.f_direct, c.nu, c.k, c.tol * cfg.quad_tol_factor, e.oscillatory, e.period_hint);
    rec.quad_value = q.value;
    rec.quad_err = q.abs_error_estimate;
    double scale = r.value != 0.0 ? std::abs(r.value) : 1.0;
    rec.rel_diff = std::abs(r.value - q.value) / scale;
    rec.detail = q.method_trace;
    if (!q.converged) {
        rec.outcome = Outcome::quad_nonconverged;
    } else if (std::isfinite(*rec.rel_diff) && *rec.rel_diff <= c.tol) {
        rec.outcome = Outcome::pass;
    } else {
        rec.outcome = Outcome::fail;
    }
    return rec;
}

/// Runs every case; the result order equals the input order whatever the
/// thread count. Unknown entries or mismatched m abort before any evaluation.
inline std::vector<VerificationRecord> run_verification(const std::vector<VerificationCase>& cases,
                                                        const HarnessConfig& cfg = {}) {
    std::map<std::string, CatalogEntry> entries;
    for (const auto& c : cases) {
        if (!entries.contains(c.entry)) {
            try {
                entries.emplace(c.entry, catalog_lookup(c.entry, cfg.params));
            } catch (const UnknownEntry& ex) {
                throw UsageError(ex.what());
            }
        }
        const auto& e = entries.at(c.entry);
        if (c.m != e.m)
            throw UsageError("entry '" + c.entry + "' is defined with m = " + std::to_string(e.m) + ", not " +
                             std::to_string(c.m));
        if (!(c.tol > 0.0)) throw UsageError("tolerance must be positive");
    }

    std::vector<VerificationRecord> records(cases.size());
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cases.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cases.size()) return;
            try {
                records[i] = verify_case(cases[i], entries.at(cases[i].entry), cfg);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
    return records;
}

// ---------------------------------------------------------------------------
// Reporting

enum class ReportFormat { csv, table };

inline constexpr std::string_view csv_header =
    "entry,nu,m,k,rmt_status,rmt_value,quad_value,quad_abs_err,rel_diff,outcome";

inline std::string optional_field(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

inline void write_csv(const std::vector<VerificationRecord>& records, std::ostream& out) {
    out << csv_header << '\n';
    for (const auto& r : records) {
        out << r.vcase.entry << ',' << format_real(r.vcase.nu) << ',' << r.vcase.m << ',' << format_real(r.vcase.k)
            << ',' << to_string(r.rmt_status) << ',' << optional_field(r.rmt_value) << ','
            << optional_field(r.quad_value) << ',' << optional_field(r.quad_err) << ','
            << optional_field(r.rel_diff) << ',' << to_string(r.outcome) << '\n';
    }
}

inline void write_table(const std::vector<VerificationRecord>& records, std::ostream& out) {
    const std::array<std::string, 10> head = {"entry",    "nu",         "m",           "k",        "status",
                                              "rmt_value", "quad_value", "quad_abs_err", "rel_diff", "outcome"};
    std::vector<std::array<std::string, 10>> rows;
    rows.push_back(head);
    auto opt = [](const std::optional<double>& v) { return v ? format_short(*v) : std::string("-"); };
    for (const auto& r : records) {
        rows.push_back({r.vcase.entry, format_short(r.vcase.nu), std::to_string(r.vcase.m), format_short(r.vcase.k),
                        to_string(r.rmt_status), opt(r.rmt_value), opt(r.quad_value), opt(r.quad_err),
                        opt(r.rel_diff), to_string(r.outcome)});
    }
    std::array<std::size_t, 10> width{};
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::string cell = row[i];
            cell.resize(width[i], ' ');
            line += cell;
            if (i + 1 < row.size()) line += "  ";
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
}

/// "N cases: PASS=.. FAIL=.." listing only outcomes that occur.
inline std::string summary_line(const std::vector<VerificationRecord>& records) {
    std::string s = std::to_string(records.size()) + " cases";
    std::string counts;
    for (Outcome o : all_outcomes) {
        auto n = std::count_if(records.begin(), records.end(), [o](const auto& r) { return r.outcome == o; });
        if (n) counts += (counts.empty() ? ": " : " ") + std::string(to_string(o)) + "=" + std::to_string(n);
    }
    return s + counts;
}

/// 0 when no FAIL, QUAD_NONCONVERGED or DIVERGENT_UNCONFIRMED record exists, else 1.
inline int exit_code(const std::vector<VerificationRecord>& records) {
    return std::any_of(records.begin(), records.end(), [](const auto& r) { return is_failure(r.outcome); }) ? 1 : 0;
}

inline void emit_report(const std::vector<VerificationRecord>& records, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::csv)
        write_csv(records, out);
    else
        write_table(records, out);
}

/// Writes the report to `path` ("-" for `stdout_stream`) and the summary line
/// to `summary`. Returns the process exit code for the records.
inline int emit_report(const std::vector<VerificationRecord>& records, ReportFormat format, const std::string& path,
                       std::ostream& stdout_stream, std::ostream& summary) {
    if (path.empty() || path == "-") {
        emit_report(records, format, stdout_stream);
    } else {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open report destination '" + path + "'");
        emit_report(records, format, file);
        file.flush();
        if (!file) throw std::runtime_error("failed writing report to '" + path + "'");
    }
    summary << summary_line(records) << '\n';
    return exit_code(records);
}

// ---------------------------------------------------------------------------
// Config files: one "key = value" per line, '#' starts a comment.

inline std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    return parse_config(in);
}

/// Applies harness-level keys. Keys consumed by the CLI itself (format,
/// entries, nu_grid, m_list, out) are returned untouched in `rest`.
inline void apply_config(const std::map<std::string, std::string>& kv, HarnessConfig& cfg,
                         std::map<std::string, std::string>* rest = nullptr) {
    for (const auto& [key, value] : kv) {
        if (key == "tol_smooth") {
            cfg.tol_smooth = parse_real(value, key);
        } else if (key == "tol_oscillatory") {
            cfg.tol_oscillatory = parse_real(value, key);
        } else if (key == "quad_tol_factor") {
            cfg.quad_tol_factor = parse_real(value, key);
        } else if (key == "nu_step") {
            cfg.nu_step = parse_real(value, key);
        } else if (key == "nu_cap") {
            cfg.nu_cap = parse_real(value, key);
        } else if (key == "k_list") {
            cfg.k_list = parse_real_list(value, key);
        } else if (key == "probe_cutoffs") {
            cfg.probe_cutoffs = parse_real_list(value, key);
        } else if (key == "threads") {
            cfg.threads = static_cast<unsigned>(parse_real(value, key));
        } else if (key == "a") {
            cfg.params["a"] = parse_real(value, key);
        } else if (rest && (key == "format" || key == "entries" || key == "nu_grid" || key == "m_list" ||
                            key == "tol" || key == "out")) {
            (*rest)[key] = value;
        } else {
            throw UsageError("unknown config key '" + key + "'");
        }
    }
    if (!(cfg.tol_smooth > 0.0) || !(cfg.tol_oscillatory > 0.0) || !(cfg.quad_tol_factor > 0.0))
        throw UsageError("tolerances must be positive");
    if (cfg.probe_cutoffs.size() < 3) throw UsageError("probe_cutoffs needs at least 3 values");
}

}  // namespace ramanujan::harness
