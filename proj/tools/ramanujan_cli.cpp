// Command-line front end: closed-form evaluation, quadrature, verification
// campaigns and the catalog listing.

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ramanujan/ramanujan.hpp"

namespace {

using namespace ramanujan;
namespace h = ramanujan::harness;

constexpr int exit_usage = 2;

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw h::UsageError("--param expects key=value, got '" + item + "'");
        out[item.substr(0, eq)] = h::parse_real(item.substr(eq + 1), "--param");
    }
    return out;
}

void print_kv(const char* key, const std::string& value) { std::cout << key << ": " << value << '\n'; }

struct Globals {
    std::string config_path;
    std::vector<std::string> params;

    /// Config file first, then CLI parameters on top.
    h::HarnessConfig load(std::map<std::string, std::string>* rest = nullptr) const {
        h::HarnessConfig cfg;
        if (!config_path.empty()) h::apply_config(h::load_config(config_path), cfg, rest);
        for (const auto& [k, v] : parse_params(params)) cfg.params[k] = v;
        return cfg;
    }
};

int run_eval(const Globals& g, const std::optional<std::string>& phi_text, const std::optional<std::string>& entry_name,
             double nu, std::optional<int> m_opt, double k) {
    h::HarnessConfig cfg = g.load();
    std::optional<CatalogEntry> entry;
    if (entry_name) entry = catalog_lookup(*entry_name, cfg.params);
    if (!phi_text && !entry) throw h::UsageError("eval needs --phi or --entry");
    PhiFunction phi = phi_text ? phi_from_expression(*phi_text) : entry->phi;
    int m = m_opt.value_or(entry ? entry->m : 1);
    if (m < 1) throw h::UsageError("--m must be >= 1");

    RmtResult r = rmt_generalized(phi, m, k, nu);
    print_kv("phi", phi.name());
    print_kv("phi(0)", h::format_real(phi.phi_at_zero()));
    print_kv("m", std::to_string(m));
    print_kv("k", h::format_real(k));
    print_kv("nu", h::format_real(nu));
    print_kv("s", h::format_real(r.s));
    print_kv("status", to_string(r.status));
    if (r.status == RmtStatus::finite) print_kv("value", h::format_real(r.value));
    print_kv("reason", r.detail);
    if (entry && entry->expected_closed_form && !phi_text) {
        // The closed form is tabulated for k = 1 and m = entry m; shift nu accordingly.
        EvalResult ex = expr::eval_ast(*entry->expected_closed_form, nu + 1.0 - k);
        if (ex.is_ok()) print_kv("expected", h::format_real(ex.value));
    }
    return 0;
}

int run_quad(const Globals& g, const std::string& entry_name, double nu, double k, std::optional<double> tol) {
    h::HarnessConfig cfg = g.load();
    CatalogEntry e = catalog_lookup(entry_name, cfg.params);
    double t = tol.value_or(e.oscillatory ? quad::default_oscillatory_tol : quad::default_smooth_tol);
    quad::QuadResult q;
    try {
        q = quad::mellin_quad(e.f_direct, nu, k, t, e.oscillatory, e.period_hint);
    } catch (const std::domain_error& ex) {
        throw h::UsageError(ex.what());
    }
    print_kv("entry", e.name);
    print_kv("value", h::format_real(q.value));
    print_kv("abs_error_estimate", h::format_real(q.abs_error_estimate));
    print_kv("evaluations", std::to_string(q.evaluations));
    print_kv("converged", q.converged ? "true" : "false");
    print_kv("method", q.method_trace);
    return q.converged ? 0 : 1;
}

struct VerifyArgs {
    std::vector<std::string> entries;
    bool all = false;
    std::optional<std::string> nu_grid;
    std::vector<int> m_list;
    std::vector<double> k_list;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<unsigned> threads;
};

int run_verify(const Globals& g, VerifyArgs a) {
    std::map<std::string, std::string> rest;
    h::HarnessConfig cfg = g.load(&rest);
    // Config supplies defaults for anything not given on the command line.
    if (a.entries.empty() && !a.all && rest.contains("entries")) {
        std::string list = rest["entries"];
        std::size_t start = 0;
        while (start <= list.size()) {
            auto comma = list.find(',', start);
            std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            item.erase(0, item.find_first_not_of(' '));
            item.erase(item.find_last_not_of(' ') + 1);
            if (!item.empty()) a.entries.push_back(item);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    if (!a.nu_grid && rest.contains("nu_grid")) a.nu_grid = rest["nu_grid"];
    if (a.m_list.empty() && rest.contains("m_list"))
        for (double m : h::parse_real_list(rest["m_list"], "m_list")) a.m_list.push_back(static_cast<int>(m));
    if (!a.tol && rest.contains("tol")) a.tol = h::parse_real(rest["tol"], "tol");
    if (!a.out && rest.contains("out")) a.out = rest["out"];
    if (!a.format && rest.contains("format")) a.format = rest["format"];
    if (!a.k_list.empty()) cfg.k_list = a.k_list;
    if (a.threads) cfg.threads = *a.threads;

    h::ReportFormat format = h::ReportFormat::table;
    std::string fmt = a.format.value_or(a.out ? "csv" : "table");
    if (fmt == "csv")
        format = h::ReportFormat::csv;
    else if (fmt != "table")
        throw h::UsageError("--format must be csv or table");

    if (a.all && !a.entries.empty()) throw h::UsageError("--entry and --all are mutually exclusive");
    std::vector<std::string> names = a.entries.empty() ? catalog_names() : a.entries;

    std::vector<h::VerificationCase> cases;
    if (a.nu_grid) {
        cases = h::expand_grid(names, h::parse_nu_range(*a.nu_grid), a.m_list, cfg.k_list, a.tol, cfg);
    } else {
        if (!a.m_list.empty()) {
            std::vector<std::string> kept;
            for (const auto& n : names) {
                int m = catalog_lookup(n, cfg.params).m;
                if (std::find(a.m_list.begin(), a.m_list.end(), m) != a.m_list.end()) kept.push_back(n);
            }
            if (kept.empty()) throw h::UsageError("empty verification grid (no entry has the requested m)");
            names = kept;
        }
        cases = h::default_campaign(names, cfg, a.tol);
    }
    auto records = h::run_verification(cases, cfg);
    return h::emit_report(records, format, a.out.value_or("-"), std::cout, a.out ? std::cout : std::cerr);
}

int run_catalog(const Globals& g) {
    h::HarnessConfig cfg = g.load();
    for (const auto& name : catalog_names()) {
        CatalogEntry e = catalog_lookup(name, cfg.params);
        std::cout << e.name << '\n';
        std::cout << "  f(x)        = " << e.description << (e.parity == Parity::even ? "  (even)" : "") << '\n';
        std::cout << "  phi(n)      = " << e.phi.name() << '\n';
        std::cout << "  m           = " << e.m << '\n';
        std::cout << "  validity    = " << h::format_short(e.nu_validity.lower) << " < nu+1-k < "
                  << h::format_short(e.nu_validity.upper) << '\n';
        if (e.expected_closed_form)
            std::cout << "  closed form = " << expr::format_ast(*e.expected_closed_form) << "  (n = nu, k = 1)\n";
        std::cout << "  phi poles   = " << e.phi.poles().describe() << '\n';
        if (e.oscillatory) std::cout << "  oscillatory, period " << h::format_short(*e.period_hint) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form Mellin integrals from series coefficients, checked by quadrature"};
    app.require_subcommand(1);
    Globals globals;
    app.add_option("--config", globals.config_path, "key = value file with harness defaults");
    app.add_option("--param", globals.params, "catalog parameter key=value (e.g. a=2.5)")->take_all();

    std::optional<std::string> eval_phi, eval_entry;
    double eval_nu = 0.0, eval_k = 1.0;
    std::optional<int> eval_m;
    auto* eval = app.add_subcommand("eval", "closed-form value (1/m) Gamma(s) phi(-s)");
    eval->add_option("--phi", eval_phi, "coefficient function phi(n) as an expression in n");
    eval->add_option("--entry", eval_entry, "catalog entry supplying phi and m");
    eval->add_option("--nu", eval_nu, "exponent nu")->required();
    eval->add_option("--m", eval_m, "power of x in the series argument (default 1)");
    eval->add_option("--k", eval_k, "exponent shift k (default 1)");

    std::string quad_entry;
    double quad_nu = 0.0, quad_k = 1.0;
    std::optional<double> quad_tol;
    auto* quadc = app.add_subcommand("quad", "quadrature of int_0^inf x^(nu-k) f(x) dx for a catalog entry");
    quadc->add_option("--entry", quad_entry, "catalog entry")->required();
    quadc->add_option("--nu", quad_nu, "exponent nu")->required();
    quadc->add_option("--k", quad_k, "exponent shift k (default 1)");
    quadc->add_option("--tol", quad_tol, "relative tolerance");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "closed form vs quadrature over a grid");
    verify->add_option("--entry", va.entries, "catalog entries (repeatable or comma separated)")->delimiter(',');
    verify->add_flag("--all", va.all, "every catalog entry (default)");
    verify->add_option("--nu-grid", va.nu_grid, "a:b:step");
    verify->add_option("--m", va.m_list, "list of m")->delimiter(',');
    verify->add_option("--k", va.k_list, "list of k")->delimiter(',');
    verify->add_option("--tol", va.tol, "relative tolerance for PASS");
    verify->add_option("--out", va.out, "output path (CSV by default)");
    verify->add_option("--format", va.format, "csv | table");
    verify->add_option("--threads", va.threads, "worker threads (default: all cores)");

    auto* catalog = app.add_subcommand("catalog", "list built-in entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*eval) return run_eval(globals, eval_phi, eval_entry, eval_nu, eval_m, eval_k);
        if (*quadc) return run_quad(globals, quad_entry, quad_nu, quad_k, quad_tol);
        if (*verify) return run_verify(globals, va);
        if (*catalog) return run_catalog(globals);
    } catch (const h::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const expr::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UnknownEntry& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const PhiError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_usage;
}
