#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "speclab/experiment.hpp"

using namespace speclab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("speclab_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("generated_at") == std::string::npos) out << line << '\n';
    return out.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json base_config(const fs::path& out_dir) {
    Json j;
    j["operator"] = {{"family", "diag_example_one"}, {"params", {{"N", 2}}}};
    j["lambdas"] = Json::array({-1.2});
    j["orders"] = Json::array({6});
    j["checks"] = Json::array({"conditions"});
    j["seed"] = 7;
    j["output_path"] = out_dir.string();
    return j;
}

}  // namespace

TEST_CASE("parse_config: validation failures") {
    Json j = base_config(fs::temp_directory_path());
    CHECK_NOTHROW(parse_config(j));

    Json missing_op = j;
    missing_op.erase("operator");
    CHECK_THROWS_AS(parse_config(missing_op), BadParams);

    Json empty_lambdas = j;
    empty_lambdas["lambdas"] = Json::array();
    CHECK_THROWS_AS(parse_config(empty_lambdas), BadParams);

    Json bad_check = j;
    bad_check["checks"] = Json::array({"nonsense"});
    CHECK_THROWS_AS(parse_config(bad_check), BadParams);

    Json bad_tol = j;
    bad_tol["tolerances"] = {{"tau", -1.0}};
    CHECK_THROWS_AS(parse_config(bad_tol), BadParams);

    Json bad_family = j;
    bad_family["operator"]["family"] = "unknown";
    CHECK_THROWS_AS(parse_config(bad_family), BadParams);
}

TEST_CASE("nudge_off_ties moves grid points into the open gap") {
    const Vec eigs = {0.0, 1.0, 1.000000001, 5.0};
    const double tt = 1e-9;

    // Far from every eigenvalue: untouched.
    CHECK(nudge_off_ties(0.5, eigs, tt) == 0.5);

    // Sitting on an eigenvalue with a wide gap: pushed 10 tie tolerances off.
    const double moved = nudge_off_ties(5.0, eigs, tt);
    CHECK(moved != 5.0);
    CHECK(std::abs(moved - 5.0) >= 10.0 * tt * 0.99);

    // A tie inside a near-degenerate cluster jumps past the whole cluster.
    const double mid = nudge_off_ties(1.0, eigs, tt);
    CHECK(std::abs(mid - 1.0) > tt);
    CHECK(std::abs(mid - 1.000000001) > tt);
    CHECK(mid < 5.0 - tt);
}

TEST_CASE("run_experiment: known diagonal pair passes and reports the dims") {
    const fs::path dir = fresh_dir("run_basic");
    const ExperimentConfig cfg = parse_config(base_config(dir));
    const RunResult res = run_experiment(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.violations.empty());
    REQUIRE(res.report["results"].size() == 1);
    const Json& row = res.report["results"][0];
    CHECK(row["report"]["dim_ker_minus_i"].get<int>() == 2);
    CHECK(row["report"]["dim_ker_plus_i"].get<int>() == 0);
    CHECK(row["checks"]["conditions"]["c3_at_rank"].get<bool>());
    CHECK(fs::exists(res.report_path));
    CHECK(fs::exists(res.csv_path));
    // every row echoes the tolerances it ran with
    CHECK(row["tolerances"]["tau"].get<double>() == 1e-9);
    CHECK(row["tolerances"]["pairing_tol"].get<double>() == 1e-8);
}

TEST_CASE("run_experiment: unperturbed operator yields all-zero spectra rows") {
    const fs::path dir = fresh_dir("run_zero");
    Json j = base_config(dir);
    j["operator"] = {{"family", "random_sym"}, {"params", {{"perturb_rank", 0}}}};
    j["lambdas"] = Json::array({0.1, 0.3});
    j["orders"] = Json::array({12});
    j["checks"] = Json::array({"conditions", "halmos"});
    const RunResult res = run_experiment(parse_config(j));
    CHECK(res.exit_code == 0);
    for (const auto& row : res.report["results"])
        for (const auto& v : row["report"]["spectrum"])
            CHECK(std::abs(v.get<double>()) < 1e-12);
}

TEST_CASE("run_experiment: a lambda tie under the reject policy is an error") {
    const fs::path dir = fresh_dir("run_tie");
    Json j = base_config(dir);
    j["lambdas"] = Json::array({-0.5});  // an eigenvalue of the base operator
    CHECK_THROWS_AS(run_experiment(parse_config(j)), TieAtThreshold);
}

TEST_CASE("run_experiment: grid materialization avoids ties") {
    const fs::path dir = fresh_dir("run_grid");
    Json j = base_config(dir);
    j["lambdas"] = {{"lo", -1.0}, {"hi", -0.2}, {"count", 5}, {"avoid_ties", true}};
    const RunResult res = run_experiment(parse_config(j));
    CHECK(res.exit_code == 0);
    CHECK(res.report["results"].size() == 5);
    // -0.5 and -1.0 are eigenvalues; the materialized grid must sit off them.
    for (const auto& row : res.report["results"]) {
        const double lambda = row["lambda"].get<double>();
        CHECK(std::abs(lambda + 0.5) > 1e-10);
        CHECK(std::abs(lambda + 1.0) > 1e-10);
    }
}

TEST_CASE("run_experiment: an unreachable tolerance registers as a violation") {
    const fs::path dir = fresh_dir("run_violation");
    Json j = base_config(dir);
    // a tilted random pair has a nonempty generic spectrum, so its tiny but
    // nonzero pair defect trips an absurdly small tolerance
    j["operator"] = {{"family", "random_sym"}, {"params", {{"perturb_rank", 2}}}};
    j["lambdas"] = Json::array({0.05});
    j["orders"] = Json::array({16});
    j["checks"] = Json::array({"halmos"});
    j["tolerances"] = {{"pairing_tol", 1e-300}};
    const RunResult res = run_experiment(parse_config(j));
    CHECK(res.exit_code == 2);
    CHECK_FALSE(res.violations.empty());
    CHECK(res.report["violations"].size() == res.violations.size());
}

TEST_CASE("run_experiment: identical config and seed reproduce the report") {
    const fs::path dir1 = fresh_dir("det_a");
    const fs::path dir2 = fresh_dir("det_b");
    Json j = base_config(fs::temp_directory_path());
    j["checks"] = Json::array({"conditions", "halmos", "weyl", "correction"});
    j["operator"] = {{"family", "random_sym"}, {"params", {{"perturb_rank", 2}}}};
    j["lambdas"] = Json::array({0.05, 0.21});
    j["orders"] = Json::array({16, 24});

    j["output_path"] = dir1.string();
    const RunResult r1 = run_experiment(parse_config(j));
    j["output_path"] = dir2.string();
    const RunResult r2 = run_experiment(parse_config(j));

    std::string a = strip_timestamp(slurp(r1.report_path));
    std::string b = strip_timestamp(slurp(r2.report_path));
    // output_path is echoed inside the report; normalize it away
    const std::string pa = dir1.string(), pb = dir2.string();
    std::size_t pos;
    while ((pos = a.find(pa)) != std::string::npos) a.replace(pos, pa.size(), "X");
    while ((pos = b.find(pb)) != std::string::npos) b.replace(pos, pb.size(), "X");
    CHECK(a == b);
    CHECK(slurp(r1.csv_path) == slurp(r2.csv_path));
}

TEST_CASE("run_experiment: every check engages on a rank-one integral pair") {
    const fs::path dir = fresh_dir("run_krein");
    Json j = base_config(dir);
    j["operator"] = {{"family", "krein_pair"}};
    j["lambdas"] = Json::array({0.45});
    j["orders"] = Json::array({40});
    j["checks"] = Json::array({"conditions", "halmos", "gap_count", "weyl",
                               "krylov_kernel", "reduction", "liaw_treil", "correction"});
    const RunResult res = run_experiment(parse_config(j));
    CHECK(res.exit_code == 0);
    const Json& checks = res.report["results"][0]["checks"];
    CHECK(checks["conditions"]["c3_at_rank"].get<bool>());
    CHECK(checks["halmos"].contains("pair_defect"));
    CHECK(checks["weyl"].contains("norms"));
    // the integral pair's direction is cyclic, so the complement is trivial
    CHECK(checks["krylov_kernel"]["skipped"].get<std::string>().find("cyclic") !=
          std::string::npos);
    CHECK(checks["reduction"]["deviation"].get<double>() <= 1e-9);
    CHECK(checks["liaw_treil"]["discrepancy"].get<double>() <= 1e-8);
    CHECK(checks["correction"]["balance_ok"].get<bool>());
}

TEST_CASE("sweep: diagonal pair trends are flat in the trace and growing in the kernel") {
    const fs::path dir = fresh_dir("sweep_diag");
    Json j = base_config(dir);
    j["orders"] = Json::array({10, 20, 40});
    const RunResult res = sweep(parse_config(j));
    CHECK(res.exit_code == 0);
    REQUIRE(res.report["trends"].size() == 1);
    const Json& row = res.report["trends"][0];
    for (const auto& tn : row["trace_norm"])
        CHECK(tn.get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(row["trace_verdict"].get<std::string>() == "trace_bounded");
    CHECK(row["kernel_verdict"].get<std::string>() == "growing_kernel");
}

TEST_CASE("sweep: requires at least three orders") {
    Json j = base_config(fs::temp_directory_path());
    j["orders"] = Json::array({10, 20});
    CHECK_THROWS_AS(sweep(parse_config(j)), BadParams);
}

TEST_CASE("sweep: Krein family across doubling bases") {
    const fs::path dir = fresh_dir("sweep_krein");
    Json j = base_config(dir);
    j["operator"] = {{"family", "krein_pair"}};
    j["lambdas"] = Json::array({0.5});
    j["orders"] = Json::array({100, 200, 400});
    const RunResult res = sweep(parse_config(j));
    CHECK(res.exit_code == 0);
    const Json& row = res.report["trends"][0];
    const auto& minabs = row["min_abs_eig"];
    for (std::size_t i = 1; i < minabs.size(); ++i)
        CHECK(minabs[i].get<double>() <= minabs[i - 1].get<double>() + 1e-12);
    // trace norm grows logarithmically here: the verdict must say growing
    CHECK(row["trace_verdict"].get<std::string>() == "trace_growing");
    CHECK(row["kernel_verdict"].get<std::string>() == "growing_kernel");
}

TEST_CASE("sweep: free lattice far outside the spectrum is entirely zero") {
    const fs::path dir = fresh_dir("sweep_free");
    Json j = base_config(dir);
    j["operator"] = {{"family", "discrete_schrodinger"}, {"params", {{"perturb_rank", 1}}}};
    j["lambdas"] = Json::array({-9.0});
    j["orders"] = Json::array({10, 20, 40});
    const RunResult res = sweep(parse_config(j));
    const Json& row = res.report["trends"][0];
    for (const auto& tn : row["trace_norm"]) CHECK(tn.get<double>() < 1e-12);
    for (const auto& r : row["dim_ker_ratio"]) CHECK(r.get<double>() == 1.0);
}
