#include <catch_amalgamated.hpp>

#include <sstream>

#include "ramanujan/harness.hpp"

using namespace ramanujan;
using namespace ramanujan::harness;

namespace {

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

HarnessConfig serial() {
    HarnessConfig cfg;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("run_verification reference cases", "[harness]") {
    std::vector<VerificationCase> exp_cases;
    for (double nu : {0.5, 1.5, 2.5}) exp_cases.push_back({"exp", nu, 1, 1.0, 1e-8});
    auto recs = run_verification(exp_cases, serial());
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) {
        CHECK(r.outcome == Outcome::pass);
        CHECK(r.rmt_value.has_value());
        CHECK(*r.rel_diff <= 1e-8);
    }

    auto skip = run_verification({{"exp", 0.2, 1, 2.0, 1e-8}}, serial());
    CHECK(skip[0].outcome == Outcome::skipped_invalid);
    CHECK_FALSE(skip[0].rmt_value.has_value());
    CHECK_FALSE(skip[0].quad_value.has_value());

    auto div = run_verification({{"geometric", 1.0, 1, 1.0, 1e-8}}, serial());
    CHECK(div[0].outcome == Outcome::divergent_confirmed);
    CHECK(div[0].rmt_status == RmtStatus::divergent);

    // Finite continuation value past the convergence interval is still divergent.
    auto past = run_verification({{"geometric", 1.5, 1, 1.0, 1e-8}}, serial());
    CHECK(past[0].rmt_status == RmtStatus::divergent);
    CHECK(past[0].outcome == Outcome::divergent_confirmed);
    CHECK(past[0].detail.find("outside convergence interval") != std::string::npos);
}

TEST_CASE("run_verification rejects bad cases before evaluating", "[harness]") {
    CHECK_THROWS_AS(run_verification({{"exp", 1.0, 1, 1.0, 1e-8}, {"nosuch", 1.0, 1, 1.0, 1e-8}}, serial()),
                    UsageError);
    CHECK_THROWS_AS(run_verification({{"exp", 1.0, 2, 1.0, 1e-8}}, serial()), UsageError);
    CHECK_THROWS_AS(run_verification({{"exp", 1.0, 1, 1.0, 0.0}}, serial()), UsageError);
}

TEST_CASE("expand_grid", "[harness]") {
    CHECK(expand_grid({"exp"}, parse_nu_range("0.5:2.5:1.0"), {1}, {1.0}, 1e-8).size() == 3);
    CHECK(expand_grid({"gauss"}, parse_nu_range("1:1:1"), {2}, {1.0}, 1e-8).size() == 1);
    CHECK_THROWS_AS(expand_grid({"exp"}, parse_nu_range("1:1:1"), {2}, {1.0}, 1e-8), UsageError);
    CHECK_THROWS_AS(expand_grid({"nosuch"}, parse_nu_range("1:1:1"), {}, {1.0}, 1e-8), UsageError);
    // Endpoint inclusive despite accumulated rounding.
    CHECK(grid_points(parse_nu_range("0:1:0.1")).size() == 11);
    CHECK_THROWS_AS(parse_nu_range("2:1:0.5"), UsageError);
    CHECK_THROWS_AS(parse_nu_range("1:2"), UsageError);

    auto mixed = expand_grid({"exp", "gauss"}, parse_nu_range("1:2:1"), {1, 2}, {0.0, 1.0}, std::nullopt);
    CHECK(mixed.size() == 8);
    CHECK(mixed[0].entry == "exp");
    CHECK(mixed[0].m == 1);
    CHECK(mixed[4].m == 2);
    CHECK(mixed[0].tol == 1e-8);
    CHECK(expand_grid({"cos"}, parse_nu_range("0.5:0.5:1"), {}, {1.0}, std::nullopt)[0].tol == 1e-5);
}

TEST_CASE("emit_report", "[harness]") {
    std::vector<VerificationCase> cases;
    for (double nu : {0.5, 1.5, 2.5}) cases.push_back({"exp", nu, 1, 1.0, 1e-8});
    auto recs = run_verification(cases, serial());

    std::ostringstream csv;
    emit_report(recs, ReportFormat::csv, csv);
    CHECK(count_lines(csv.str()) == 4);
    CHECK(csv.str().rfind("entry,nu,m,k,rmt_status,rmt_value,quad_value,quad_abs_err,rel_diff,outcome\n", 0) == 0);
    CHECK(exit_code(recs) == 0);
    CHECK(summary_line(recs) == "3 cases: PASS=3");

    std::ostringstream empty;
    emit_report({}, ReportFormat::csv, empty);
    CHECK(empty.str() == std::string(csv_header) + "\n");
    CHECK(summary_line({}) == "0 cases");
    CHECK(exit_code({}) == 0);

    std::ostringstream table;
    emit_report(recs, ReportFormat::table, table);
    CHECK(table.str().find("PASS") != std::string::npos);

    recs.push_back(recs.back());
    recs.back().outcome = Outcome::fail;
    CHECK(exit_code(recs) == 1);
    recs.back().outcome = Outcome::skipped_invalid;
    CHECK(exit_code(recs) == 0);
    recs.back().outcome = Outcome::divergent_unconfirmed;
    CHECK(exit_code(recs) == 1);

    std::ostringstream sink;
    CHECK_THROWS_AS(emit_report(recs, ReportFormat::csv, "/nonexistent-dir/x.csv", sink, sink), std::runtime_error);
}

TEST_CASE("format_real is fixed and locale free", "[harness]") {
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(-2.5e-20) == "-2.4999999999999999e-20");
    CHECK_THROWS_AS(parse_real("1,5", "x"), UsageError);
    CHECK(parse_real_list("0, 1,2", "k") == std::vector<double>{0.0, 1.0, 2.0});
}

TEST_CASE("config files", "[harness]") {
    std::istringstream in("# campaign\n tol_smooth = 1e-9  # tighter\n\nk_list = 1,2\na=2.5\nformat = csv\n");
    auto kv = parse_config(in);
    CHECK(kv.size() == 4);
    HarnessConfig cfg;
    std::map<std::string, std::string> rest;
    apply_config(kv, cfg, &rest);
    CHECK(cfg.tol_smooth == 1e-9);
    CHECK(cfg.k_list == std::vector<double>{1.0, 2.0});
    CHECK(cfg.params.at("a") == 2.5);
    CHECK(rest.at("format") == "csv");

    std::istringstream bad("tol_smooth 1e-9\n");
    CHECK_THROWS_AS(parse_config(bad), UsageError);
    HarnessConfig c2;
    CHECK_THROWS_AS(apply_config({{"bogus", "1"}}, c2), UsageError);
    CHECK_THROWS_AS(apply_config({{"tol_smooth", "-1"}}, c2), UsageError);
    CHECK_THROWS_AS(load_config("/nonexistent-dir/cfg"), UsageError);
}

TEST_CASE("serial and parallel runs give identical records", "[harness][property]") {
    HarnessConfig cfg;
    auto cases = default_campaign(catalog_names(), cfg);
    cfg.threads = 1;
    auto a = run_verification(cases, cfg);
    cfg.threads = 4;
    auto b = run_verification(cases, cfg);
    std::ostringstream sa, sb;
    write_csv(a, sa);
    write_csv(b, sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("full default campaign has no failures", "[harness][property]") {
    HarnessConfig cfg;
    auto cases = default_campaign(catalog_names(), cfg);
    auto recs = run_verification(cases, cfg);
    int pass = 0;
    for (const auto& r : recs) {
        INFO(r.vcase.entry << " nu = " << r.vcase.nu << " k = " << r.vcase.k << ": " << r.detail);
        CHECK(r.outcome != Outcome::fail);
        CHECK_FALSE(is_failure(r.outcome));
        if (r.outcome == Outcome::pass) ++pass;
    }
    CHECK(pass > 50);
    CHECK(exit_code(recs) == 0);
}
