#include "speclab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "speclab/cayley.hpp"
#include "speclab/liaw_treil.hpp"
#include "speclab/rng.hpp"

namespace speclab {

namespace {

const std::set<std::string> kKnownChecks = {
    "conditions", "halmos", "gap_count",  "weyl",
    "krylov_kernel", "reduction", "liaw_treil", "correction",
};

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (const char* cap = std::getenv("LAB_THREADS")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v >= 1) workers = std::min<std::size_t>(workers, static_cast<std::size_t>(v));
    }
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json tolerances_json(const Tolerances& t) {
    Json j;
    j["tau"] = t.tau;
    j["halmos_tau"] = t.halmos_tau;
    j["pairing_tol"] = t.pairing_tol;
    j["reduction_tol"] = t.reduction_tol;
    j["krylov_tol"] = t.krylov_tol;
    j["liaw_tol"] = t.liaw_tol;
    j["kernel_bound"] = t.kernel_bound;
    return j;
}

Json config_echo(const ExperimentConfig& cfg) {
    Json j;
    Json op;
    op["family"] = family_name(cfg.op.family);
    Json params;
    for (const auto& [k, v] : cfg.op.params) params[k] = v;
    op["params"] = std::move(params);
    op["seed"] = cfg.op.seed;
    j["operator"] = std::move(op);
    if (cfg.grid) {
        Json g;
        g["lo"] = cfg.grid->lo;
        g["hi"] = cfg.grid->hi;
        g["count"] = cfg.grid->count;
        g["avoid_ties"] = cfg.grid->avoid_ties;
        j["lambdas"] = std::move(g);
    } else {
        j["lambdas"] = cfg.lambdas;
    }
    j["orders"] = cfg.orders;
    j["checks"] = cfg.checks;
    j["tolerances"] = tolerances_json(cfg.tol);
    j["seed"] = cfg.seed;
    j["output_path"] = cfg.output_path;
    j["interval_kind"] =
        cfg.kind == IntervalKind::open_below ? "open_below" : "closed_below";
    j["tie_policy"] = cfg.tie_policy == TiePolicy::reject ? "reject" : "resolve";
    return j;
}

struct OrderBlock {
    std::size_t size_param = 0;
    OperatorPair pair;
    EigSystem eig_t;
    EigSystem eig_ts;
    Vec lambdas;
};

Vec merged_sorted_eigs(const OrderBlock& block) {
    Vec all = block.eig_t.values;
    all.insert(all.end(), block.eig_ts.values.begin(), block.eig_ts.values.end());
    std::sort(all.begin(), all.end());
    return all;
}

Vec materialize_lambdas(const ExperimentConfig& cfg, const Vec& sorted_eigs) {
    if (!cfg.grid) return cfg.lambdas;
    const LambdaGrid& g = *cfg.grid;
    Vec out;
    out.reserve(g.count);
    for (std::size_t i = 0; i < g.count; ++i) {
        const double t = g.count == 1
                             ? 0.5
                             : static_cast<double>(i) / static_cast<double>(g.count - 1);
        out.push_back(g.lo + (g.hi - g.lo) * t);
    }
    if (g.avoid_ties && !sorted_eigs.empty()) {
        double scale = 0.0;
        for (double v : sorted_eigs) scale = std::max(scale, std::abs(v));
        const double tie_tol = 1e-9 * (1.0 + scale);
        for (double& lambda : out) lambda = nudge_off_ties(lambda, sorted_eigs, tie_tol);
    }
    return out;
}

OrderBlock build_block(const ExperimentConfig& cfg, std::size_t size_param) {
    OrderBlock block;
    block.size_param = size_param;
    block.pair = make_operator(cfg.op, size_param);
    block.eig_t = eig_sym(block.pair.T);
    block.eig_ts = eig_sym(block.pair.T + block.pair.S);
    block.lambdas = materialize_lambdas(cfg, merged_sorted_eigs(block));
    return block;
}

struct CellOutcome {
    Json row;
    Vec spectrum;
    double lambda = 0.0;
    std::size_t matrix_order = 0;
    std::vector<Violation> violations;
};

void add_violation(CellOutcome& cell, const std::string& check, const std::string& msg) {
    cell.violations.push_back({cell.lambda, cell.matrix_order, check, msg});
}

Json report_json(const ProjDiffReport& r) {
    Json j;
    j["lambda"] = r.lambda;
    j["order"] = r.order;
    j["interval_kind"] =
        r.interval_kind == IntervalKind::open_below ? "open_below" : "closed_below";
    j["tau"] = r.tau;
    j["dim_ker"] = r.dim_ker;
    j["dim_ker_minus_i"] = r.dim_ker_minus_i;
    j["dim_ker_plus_i"] = r.dim_ker_plus_i;
    j["min_abs_eig"] = r.min_abs_eig;
    j["max_eig"] = r.max_eig;
    j["min_eig"] = r.min_eig;
    j["trace_norm"] = r.trace_norm;
    Json c3;
    for (const auto& [n, ok] : r.c3_satisfied_for_n) c3[std::to_string(n)] = ok;
    j["c3_satisfied_for_n"] = std::move(c3);
    j["spectrum"] = r.spectrum;
    return j;
}

void run_checks(const ExperimentConfig& cfg, const OrderBlock& block, const SymOp& d_op,
                const ProjDiffReport& report, std::uint64_t cell_seed, CellOutcome& cell) {
    Json checks;
    const OperatorPair& pair = block.pair;

    for (const std::string& name : cfg.checks) {
        if (name == "conditions") {
            const ConditionVerdict v =
                check_conditions(report, static_cast<int>(pair.rank_S));
            Json j;
            j["c3_at_rank"] = v.c3;
            j["c2_proxy"] = v.c2_proxy;
            j["c1_dim_ker"] = v.c1_dim_ker;
            j["c1_order"] = v.c1_order;
            checks[name] = std::move(j);
            if (!v.c3)
                add_violation(cell, name,
                              "dim Ker(D-I) and dim Ker(D+I) differ by more than rank S");
        } else if (name == "halmos") {
            Json j;
            try {
                const HalmosSplit h =
                    halmos_split_of_spectrum(report.spectrum, cfg.tol.halmos_tau);
                j["dim_ker"] = h.dim_ker;
                j["dim_plus_one"] = h.dim_plus_one;
                j["dim_minus_one"] = h.dim_minus_one;
                j["generic_count"] = h.generic_spectrum.size();
                j["pair_defect"] = h.pair_defect;
                if (h.pair_defect > cfg.tol.pairing_tol)
                    add_violation(cell, name, "generic spectrum fails +-symmetry");
            } catch (const NotAProjectionDifference& err) {
                j["error"] = err.what();
                add_violation(cell, name, err.what());
            }
            checks[name] = std::move(j);
        } else if (name == "gap_count") {
            Json j;
            const Vec& tv = block.eig_t.values;
            double best_l = 0.0, best_r = 0.0, best_w = 0.0;
            for (std::size_t i = 0; i + 1 < tv.size(); ++i) {
                const double w = tv[i + 1] - tv[i];
                if (w > best_w) {
                    best_w = w;
                    best_l = tv[i];
                    best_r = tv[i + 1];
                }
            }
            const double margin = 1e-9 * (1.0 + block.eig_t.spectral_radius());
            if (best_w <= 4.0 * margin) {
                j["skipped"] = "no usable spectral gap";
            } else {
                const double l = best_l + margin, r = best_r - margin;
                std::size_t count = 0;
                for (double v : block.eig_ts.values)
                    if (v > l && v < r) ++count;
                j["interval"] = Json::array({l, r});
                j["count"] = count;
                j["rank_s"] = pair.rank_S;
                if (count > pair.rank_S)
                    add_violation(cell, name, "more eigenvalues in the gap than rank S");
            }
            checks[name] = std::move(j);
        } else if (name == "weyl") {
            Json j;
            const std::size_t n = pair.T.order();
            const std::size_t probes =
                std::max<std::size_t>(2, std::min<std::size_t>(8, n / 8));
            try {
                const Vec norms = weyl_probe(pair.T, pair.S, pair.phi, cell.lambda, probes,
                                             cell_seed, cfg.kind);
                j["norms"] = norms;
            } catch (const ProbeExhausted& err) {
                j["skipped"] = err.what();
            }
            checks[name] = std::move(j);
        } else if (name == "krylov_kernel") {
            Json j;
            if (pair.rank_S != 1 || pair.phi.empty()) {
                j["skipped"] = "needs a rank-one perturbation with a known direction";
            } else {
                try {
                    const double worst = krylov_kernel_check(pair.T, pair.phi.front(),
                                                             pair.alphas.front(),
                                                             {cell.lambda});
                    j["max_complement_norm"] = worst;
                    if (worst > cfg.tol.krylov_tol)
                        add_violation(cell, name, "Krylov complement not annihilated");
                } catch (const NothingToCheck&) {
                    j["skipped"] = "direction is cyclic; complement is trivial";
                }
            }
            checks[name] = std::move(j);
        } else if (name == "reduction") {
            Json j;
            try {
                const double dev = verify_reduction(pair.T, pair.S, cell.lambda);
                j["deviation"] = dev;
                if (dev > cfg.tol.reduction_tol)
                    add_violation(cell, name, "reduced difference deviates from direct");
            } catch (const OutOfRange&) {
                const double norm_d = max_abs(d_op);
                j["below_shift"] = true;
                j["difference_norm"] = norm_d;
                if (norm_d > cfg.tol.reduction_tol)
                    add_violation(cell, name,
                                  "difference should vanish below the shifted range");
            }
            checks[name] = std::move(j);
        } else if (name == "liaw_treil") {
            Json j;
            if (pair.rank_S != 1 || pair.phi.empty()) {
                j["skipped"] = "needs a rank-one perturbation with a known direction";
            } else {
                Rng rng(cell_seed ^ 0x5bf03635f0a5b1f5ULL);
                Vec coeffs(7);
                for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
                try {
                    const LiawTreilResult res = liaw_treil_transform(
                        pair.T, pair.phi.front(), pair.alphas.front(), coeffs);
                    j["discrepancy"] = res.discrepancy;
                    j["unitarity_defect"] = res.unitarity_defect;
                    if (res.discrepancy > cfg.tol.liaw_tol)
                        add_violation(cell, name, "transform disagrees with the unitary");
                    if (res.unitarity_defect > cfg.tol.liaw_tol)
                        add_violation(cell, name, "transform fails to preserve the norm");
                } catch (const LabError& err) {
                    j["skipped"] = err.what();
                }
            }
            checks[name] = std::move(j);
        } else if (name == "correction") {
            Json j;
            const Vec budget = default_correction_budget(pair.T.order());
            try {
                const SymOp k_op = build_correction(d_op, budget, cfg.tol.tau);
                const CorrectionCheck chk = verify_correction(d_op, k_op, budget, cfg.tol.tau);
                j["spectrum_ok"] = chk.spectrum_ok;
                j["balance_ok"] = chk.balance_ok;
                j["kernel_ok"] = chk.kernel_ok;
                j["budget_ok"] = chk.budget_ok;
                if (!chk.all_ok())
                    add_violation(cell, name, "correction postconditions violated");
            } catch (const LabError& err) {
                j["error"] = err.what();
                add_violation(cell, name, err.what());
            }
            checks[name] = std::move(j);
        }
    }
    cell.row["checks"] = std::move(checks);
}

CellOutcome evaluate_cell(const ExperimentConfig& cfg, const OrderBlock& block,
                          double lambda, std::uint64_t cell_seed) {
    CellOutcome cell;
    cell.lambda = lambda;
    cell.matrix_order = block.pair.T.order();

    const Projector p = spectral_projector(block.eig_ts, lambda, cfg.kind, cfg.tie_policy);
    const Projector q = spectral_projector(block.eig_t, lambda, cfg.kind, cfg.tie_policy);
    const SymOp d_op = p.matrix - q.matrix;
    const ProjDiffReport report = report_from_spectrum(eig_sym(d_op).values, lambda,
                                                       cell.matrix_order, cfg.kind,
                                                       cfg.tol.tau);
    cell.spectrum = report.spectrum;
    cell.row["lambda"] = lambda;
    cell.row["order"] = cell.matrix_order;
    cell.row["size_param"] = block.size_param;
    cell.row["report"] = report_json(report);
    cell.row["tolerances"] = tolerances_json(cfg.tol);
    run_checks(cfg, block, d_op, report, cell_seed, cell);
    return cell;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LabError("cannot write " + path);
    out << text;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double nudge_off_ties(double lambda, const Vec& sorted_eigs, double tie_tol) {
    if (sorted_eigs.empty()) return lambda;
    const double margin = 10.0 * tie_tol;

    std::size_t nearest = 0;
    double best = std::abs(lambda - sorted_eigs[0]);
    for (std::size_t i = 1; i < sorted_eigs.size(); ++i) {
        const double d = std::abs(lambda - sorted_eigs[i]);
        if (d < best) {
            best = d;
            nearest = i;
        }
    }
    if (best > margin) return lambda;

    const double e = sorted_eigs[nearest];
    // Step toward the midpoint of the gap lambda leans into. Gap edges are
    // the nearest eigenvalues strictly beyond the margin, so duplicated
    // eigenvalues (shared by both operators) do not collapse the gap.
    const bool rightwards = lambda >= e;
    if (rightwards) {
        double edge = e + 4.0 * margin;
        for (std::size_t i = nearest; i < sorted_eigs.size(); ++i)
            if (sorted_eigs[i] > e + margin) {
                edge = sorted_eigs[i];
                break;
            }
        return (edge - e > 2.0 * margin) ? e + margin : 0.5 * (e + edge);
    }
    double edge = e - 4.0 * margin;
    for (std::size_t i = nearest + 1; i-- > 0;)
        if (sorted_eigs[i] < e - margin) {
            edge = sorted_eigs[i];
            break;
        }
    return (e - edge > 2.0 * margin) ? e - margin : 0.5 * (e + edge);
}

ExperimentConfig parse_config(const Json& j) {
    ExperimentConfig cfg;
    if (!j.is_object()) throw BadParams("config: top level must be an object");

    if (!j.contains("operator") || !j["operator"].is_object())
        throw BadParams("config: missing operator object");
    const Json& op = j["operator"];
    cfg.op.family = family_from_name(op.at("family").get<std::string>());
    if (op.contains("params")) {
        for (const auto& [k, v] : op["params"].items()) {
            if (!v.is_number()) throw BadParams("config: parameter " + k + " must be numeric");
            cfg.op.params[k] = v.get<double>();
        }
    }
    cfg.seed = j.value("seed", 0ULL);
    cfg.op.seed = op.value("seed", cfg.seed);

    if (!j.contains("lambdas")) throw BadParams("config: missing lambdas");
    const Json& lj = j["lambdas"];
    if (lj.is_array()) {
        for (const auto& v : lj) cfg.lambdas.push_back(v.get<double>());
        if (cfg.lambdas.empty()) throw BadParams("config: lambdas must be nonempty");
    } else if (lj.is_object()) {
        LambdaGrid g;
        g.lo = lj.at("lo").get<double>();
        g.hi = lj.at("hi").get<double>();
        g.count = lj.at("count").get<std::size_t>();
        g.avoid_ties = lj.value("avoid_ties", true);
        if (g.count == 0) throw BadParams("config: grid count must be positive");
        if (!(g.hi >= g.lo)) throw BadParams("config: grid hi must be >= lo");
        cfg.grid = g;
    } else {
        throw BadParams("config: lambdas must be a list or a grid object");
    }

    if (!j.contains("orders") || !j["orders"].is_array() || j["orders"].empty())
        throw BadParams("config: orders must be a nonempty list");
    for (const auto& v : j["orders"]) {
        const auto n = v.get<long long>();
        if (n <= 0) throw BadParams("config: orders must be positive");
        cfg.orders.push_back(static_cast<std::size_t>(n));
    }

    if (j.contains("checks")) {
        for (const auto& v : j["checks"]) {
            const std::string name = v.get<std::string>();
            if (!kKnownChecks.count(name)) throw BadParams("config: unknown check " + name);
            cfg.checks.push_back(name);
        }
    }

    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        cfg.tol.tau = t.value("tau", cfg.tol.tau);
        cfg.tol.halmos_tau = t.value("halmos_tau", cfg.tol.halmos_tau);
        cfg.tol.pairing_tol = t.value("pairing_tol", cfg.tol.pairing_tol);
        cfg.tol.reduction_tol = t.value("reduction_tol", cfg.tol.reduction_tol);
        cfg.tol.krylov_tol = t.value("krylov_tol", cfg.tol.krylov_tol);
        cfg.tol.liaw_tol = t.value("liaw_tol", cfg.tol.liaw_tol);
        cfg.tol.kernel_bound = t.value("kernel_bound", cfg.tol.kernel_bound);
        for (double v : {cfg.tol.tau, cfg.tol.halmos_tau, cfg.tol.pairing_tol,
                         cfg.tol.reduction_tol, cfg.tol.krylov_tol, cfg.tol.liaw_tol})
            if (!(v > 0.0)) throw BadParams("config: tolerances must be positive");
    }

    cfg.output_path = j.value("output_path", std::string("."));
    const std::string kind = j.value("interval_kind", std::string("open_below"));
    if (kind == "open_below")
        cfg.kind = IntervalKind::open_below;
    else if (kind == "closed_below")
        cfg.kind = IntervalKind::closed_below;
    else
        throw BadParams("config: interval_kind must be open_below or closed_below");
    const std::string policy = j.value("tie_policy", std::string("reject"));
    if (policy == "reject")
        cfg.tie_policy = TiePolicy::reject;
    else if (policy == "resolve")
        cfg.tie_policy = TiePolicy::resolve;
    else
        throw BadParams("config: tie_policy must be reject or resolve");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadParams("cannot open config file " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& err) {
        throw BadParams(std::string("config parse error: ") + err.what());
    }
    return parse_config(j);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_path);

    std::vector<OrderBlock> blocks(cfg.orders.size());
    parallel_for(cfg.orders.size(),
                 [&](std::size_t i) { blocks[i] = build_block(cfg, cfg.orders[i]); });

    struct CellRef {
        std::size_t block_index;
        std::size_t lambda_index;
    };
    std::vector<CellRef> refs;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t l = 0; l < blocks[b].lambdas.size(); ++l) refs.push_back({b, l});

    std::vector<CellOutcome> cells(refs.size());
    parallel_for(refs.size(), [&](std::size_t i) {
        const CellRef& ref = refs[i];
        const OrderBlock& block = blocks[ref.block_index];
        const std::uint64_t cell_seed =
            cfg.seed * 1000003ULL + ref.block_index * 10007ULL + ref.lambda_index;
        cells[i] = evaluate_cell(cfg, block, block.lambdas[ref.lambda_index], cell_seed);
    });

    RunResult out;
    out.report["schema"] = "speclab-report-v1";
    out.report["generated_at"] = timestamp_utc();
    out.report["config_echo"] = config_echo(cfg);
    Json results = Json::array();
    Json violations = Json::array();
    std::string csv = "lambda,order,eig_index,eig_value\n";
    for (const CellOutcome& cell : cells) {
        results.push_back(cell.row);
        for (const Violation& v : cell.violations) {
            Json vj;
            vj["lambda"] = v.lambda;
            vj["order"] = v.order;
            vj["check"] = v.check;
            vj["message"] = v.message;
            violations.push_back(std::move(vj));
            out.violations.push_back(v);
        }
        for (std::size_t i = 0; i < cell.spectrum.size(); ++i) {
            csv += format_double(cell.lambda);
            csv += ',';
            csv += std::to_string(cell.matrix_order);
            csv += ',';
            csv += std::to_string(i);
            csv += ',';
            csv += format_double(cell.spectrum[i]);
            csv += '\n';
        }
    }
    out.report["results"] = std::move(results);
    out.report["violations"] = std::move(violations);

    out.report_path = (fs::path(cfg.output_path) / "report.json").string();
    out.csv_path = (fs::path(cfg.output_path) / "spectra.csv").string();
    write_text_file(out.report_path, out.report.dump(2) + "\n");
    write_text_file(out.csv_path, csv);
    out.exit_code = out.violations.empty() ? 0 : 2;
    return out;
}

RunResult sweep(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    if (cfg.orders.size() < 3) throw BadParams("sweep: at least 3 orders required");
    fs::create_directories(cfg.output_path);

    std::vector<OrderBlock> blocks(cfg.orders.size());
    parallel_for(cfg.orders.size(), [&](std::size_t i) {
        OrderBlock block;
        block.size_param = cfg.orders[i];
        block.pair = make_operator(cfg.op, cfg.orders[i]);
        block.eig_t = eig_sym(block.pair.T);
        block.eig_ts = eig_sym(block.pair.T + block.pair.S);
        blocks[i] = std::move(block);
    });

    // One shared lambda list: trend rows must line up across orders, so ties
    // are avoided against the union of all truncation spectra.
    Vec all_eigs;
    for (const OrderBlock& b : blocks) {
        all_eigs.insert(all_eigs.end(), b.eig_t.values.begin(), b.eig_t.values.end());
        all_eigs.insert(all_eigs.end(), b.eig_ts.values.begin(), b.eig_ts.values.end());
    }
    std::sort(all_eigs.begin(), all_eigs.end());
    ExperimentConfig shared = cfg;
    const Vec lambdas = materialize_lambdas(shared, all_eigs);

    struct TrendCell {
        std::size_t dim_ker = 0;
        double trace_norm = 0.0;
        double min_abs_eig = 0.0;
        std::size_t matrix_order = 0;
    };
    std::vector<TrendCell> grid(lambdas.size() * blocks.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const std::size_t li = i / blocks.size();
        const std::size_t bi = i % blocks.size();
        const OrderBlock& block = blocks[bi];
        const Projector p =
            spectral_projector(block.eig_ts, lambdas[li], cfg.kind, cfg.tie_policy);
        const Projector q =
            spectral_projector(block.eig_t, lambdas[li], cfg.kind, cfg.tie_policy);
        const ProjDiffReport r =
            report_from_spectrum(eig_sym(p.matrix - q.matrix).values, lambdas[li],
                                 block.pair.T.order(), cfg.kind, cfg.tol.tau);
        grid[i] = {r.dim_ker, r.trace_norm, r.min_abs_eig, r.order};
    });

    RunResult out;
    out.report["schema"] = "speclab-sweep-v1";
    out.report["generated_at"] = timestamp_utc();
    out.report["config_echo"] = config_echo(cfg);
    Json trends = Json::array();
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        Json row;
        row["lambda"] = lambdas[li];
        Json orders = Json::array(), dims = Json::array(), ratios = Json::array(),
             traces = Json::array(), minabs = Json::array();
        bool ratios_nondecreasing = true, dims_bounded = true, traces_monotone = true;
        double last_ratio = 0.0, first_trace = 0.0, last_trace = 0.0;
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const TrendCell& c = grid[li * blocks.size() + bi];
            const double ratio =
                static_cast<double>(c.dim_ker) / static_cast<double>(c.matrix_order);
            orders.push_back(c.matrix_order);
            dims.push_back(c.dim_ker);
            ratios.push_back(ratio);
            traces.push_back(c.trace_norm);
            minabs.push_back(c.min_abs_eig);
            if (bi == 0) {
                first_trace = c.trace_norm;
            } else {
                if (ratio < last_ratio - 0.01) ratios_nondecreasing = false;
                if (c.trace_norm < last_trace - 1e-9) traces_monotone = false;
            }
            if (c.dim_ker > cfg.tol.kernel_bound) dims_bounded = false;
            last_ratio = ratio;
            last_trace = c.trace_norm;
        }
        std::string kernel_verdict = "unstable";
        if (ratios_nondecreasing && last_ratio >= 0.1)
            kernel_verdict = "growing_kernel";
        else if (dims_bounded)
            kernel_verdict = "bounded_kernel";
        // A strictly climbing trace (even a slow, logarithmic climb) counts as
        // growing; otherwise bounded.
        const bool trace_growing =
            last_trace > 1.25 * first_trace + 0.1 ||
            (traces_monotone && last_trace - first_trace > 0.02 + 0.05 * first_trace);
        const std::string trace_verdict = trace_growing ? "trace_growing" : "trace_bounded";
        row["orders"] = std::move(orders);
        row["dim_ker"] = std::move(dims);
        row["dim_ker_ratio"] = std::move(ratios);
        row["trace_norm"] = std::move(traces);
        row["min_abs_eig"] = std::move(minabs);
        row["kernel_verdict"] = kernel_verdict;
        row["trace_verdict"] = trace_verdict;
        row["tolerances"] = tolerances_json(cfg.tol);
        trends.push_back(std::move(row));
    }
    out.report["trends"] = std::move(trends);

    out.report_path = (fs::path(cfg.output_path) / "sweep.json").string();
    write_text_file(out.report_path, out.report.dump(2) + "\n");
    out.exit_code = 0;
    return out;
}

Vec default_correction_budget(std::size_t count) {
    Vec a(count);
    for (std::size_t j = 0; j < count; ++j) a[j] = 1.0 / (5.0 * static_cast<double>(j + 1));
    return a;
}

CorrectionCheck verify_correction(const SymOp& D, const SymOp& K, const Vec& a_seq,
                                  double tau) {
    CorrectionCheck chk;
    const EigSystem ed = eig_sym(D);
    const EigSystem edk = eig_sym(D - K);
    const EigSystem ek = eig_sym(K);

    chk.spectrum_ok = true;
    for (double v : edk.values)
        if (std::abs(v) > 1.0 + 1e-10) chk.spectrum_ok = false;

    chk.kernel_ok =
        numerical_kernel_dim(ed, tau) == numerical_kernel_dim(edk, tau);

    // Cluster the non-kernel corrected spectrum by |value| and require each
    // cluster to balance its signs up to one.
    struct Signed {
        double mag;
        int sign;
    };
    std::vector<Signed> entries;
    for (double v : edk.values)
        if (std::abs(v) > tau) entries.push_back({std::abs(v), v > 0.0 ? 1 : -1});
    std::sort(entries.begin(), entries.end(),
              [](const Signed& x, const Signed& y) { return x.mag > y.mag; });
    chk.balance_ok = true;
    const double cluster_gap = std::max(tau, 1e-12);
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        long balance = 0;
        while (j < entries.size() &&
               (j == i || entries[j - 1].mag - entries[j].mag <= cluster_gap)) {
            balance += entries[j].sign;
            ++j;
        }
        if (std::llabs(balance) > 1) chk.balance_ok = false;
        i = j;
    }

    Vec k_mags;
    for (double v : ek.values)
        if (std::abs(v) > 1e-12) k_mags.push_back(std::abs(v));
    std::sort(k_mags.begin(), k_mags.end(), std::greater<>());
    chk.budget_ok = k_mags.size() <= a_seq.size();
    for (std::size_t j = 0; chk.budget_ok && j < k_mags.size(); ++j)
        if (k_mags[j] > a_seq[j]) chk.budget_ok = false;
    return chk;
}

}  // namespace speclab
