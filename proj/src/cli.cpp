#include "fairbound/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fairbound/core.hpp"
#include "fairbound/data.hpp"
#include "fairbound/divergence.hpp"
#include "fairbound/oracle.hpp"

namespace fairbound::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Single atomic write: build the full payload, write a temp file, rename.
void write_file_atomic(const std::string& path, const std::string& payload) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << payload;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, target);
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

// Feature-only CSV (header + numeric fields), the input format of
// estimate-tv sample files.
core::Matrix load_sample_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::size_t cols = 1 + static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        std::string field;
        std::size_t got = 0;
        while (std::getline(ss, field, ',')) {
            values.push_back(std::stod(field));
            ++got;
        }
        if (got != cols) throw std::runtime_error(path + ": ragged row");
        ++rows;
    }
    if (rows == 0) throw std::runtime_error(path + ": no sample rows");
    core::Matrix m(rows, cols, 0.0);
    m.values = std::move(values);
    return m;
}

struct EstimatedParams {
    bounds::BoundParams params;
    core::GroupStatistics stats;
};

// Shared pipeline: load, standardize, estimate the three TV distances.
// The three estimator runs use seed, seed+1, seed+2.
EstimatedParams estimate_params_from_data(const std::string& data_path,
                                          const std::string& schema_path, std::uint64_t seed,
                                          double lr, int iters) {
    const data::DatasetSchema schema = data::load_schema(schema_path);
    data::LoadResult loaded = data::load_csv(data_path, schema);
    data::standardize_full(loaded.dataset, loaded.report);

    EstimatedParams out;
    out.stats = core::compute_group_stats(loaded.dataset);
    const data::GroupConditionalSamples samples =
        data::group_conditional_samples(loaded.dataset);

    divergence::EstimatorConfig cfg;
    cfg.learning_rate = lr;
    cfg.max_iters = iters;

    cfg.seed = seed;
    out.params.dtv_global =
        divergence::estimate_tv_variational(samples.class1, samples.class0, cfg).value;
    cfg.seed = seed + 1;
    out.params.dtv_a =
        divergence::estimate_tv_variational(samples.cell[1][0], samples.cell[0][0], cfg).value;
    cfg.seed = seed + 2;
    out.params.dtv_b =
        divergence::estimate_tv_variational(samples.cell[1][1], samples.cell[0][1], cfg).value;
    out.params.alpha = out.stats.alpha;
    out.params.beta = out.stats.beta;
    return out;
}

} // namespace

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0, step = 0.0, stop = 0.0;
    char extra = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &step, &stop, &extra) != 3)
        throw std::invalid_argument("bad grid \"" + spec + "\" (expected start:step:stop)");
    if (step <= 0.0 || stop < start)
        throw std::invalid_argument("bad grid \"" + spec + "\" (need step > 0, stop >= start)");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = start + static_cast<double>(i) * step;
        if (v > stop + step * 1e-9) break;
        grid.push_back(v);
    }
    return grid;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        out.push_back(std::stod(field));
    }
    if (out.empty()) throw std::invalid_argument("empty list \"" + csv + "\"");
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::istringstream ss(csv);
    std::string field;
    while (std::getline(ss, field, ',')) {
        if (field.empty()) continue;
        out.push_back(std::stoull(field));
    }
    if (out.empty()) throw std::invalid_argument("empty seed list \"" + csv + "\"");
    return out;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::uint64_t hash = 1469598103934665603ull; // FNV-1a
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

Manifest::Manifest(std::string command) : command_(std::move(command)) {}

void Manifest::add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
}
void Manifest::add(const std::string& key, double value) { entries_.emplace_back(key, fmt(value)); }
void Manifest::add(const std::string& key, std::uint64_t value) {
    entries_.emplace_back(key, std::to_string(value));
}
void Manifest::add_input_digest(const std::string& path) {
    entries_.emplace_back(std::filesystem::path(path).filename().string() + "_digest",
                          file_digest(path));
}

void Manifest::write(const std::string& path, double duration_ms) const {
    std::ostringstream out;
    out << "command = " << command_ << '\n';
    out << "version = " << kToolVersion << '\n';
    for (const auto& [key, value] : entries_) out << key << " = " << value << '\n';
    out << "duration_ms = " << fmt(duration_ms) << '\n';
    write_file_atomic(path, out.str());
}

int cmd_params(const ParamsOptions& opt) {
    Stopwatch timer;
    const EstimatedParams est =
        estimate_params_from_data(opt.data_path, opt.schema_path, opt.seed, opt.lr, opt.iters);

    const double bound0 = bounds::effective_bound(est.params, 0.0);
    const double bound5 = bounds::effective_bound(est.params, 0.05);

    std::ostringstream kv;
    kv << "alpha = " << fmt(est.params.alpha) << '\n'
       << "beta = " << fmt(est.params.beta) << '\n'
       << "dtv_global = " << fmt(est.params.dtv_global) << '\n'
       << "dtv_a = " << fmt(est.params.dtv_a) << '\n'
       << "dtv_b = " << fmt(est.params.dtv_b) << '\n'
       << "bound_eps_0 = " << fmt(bound0) << '\n'
       << "bound_eps_0.05 = " << fmt(bound5) << '\n';
    write_file_atomic(opt.out_prefix + ".params.txt", kv.str());

    std::ostringstream csv;
    csv << "dataset,alpha,beta,dtv_global,dtv_a,dtv_b,bound_eps_0,bound_eps_0.05\n"
        << std::filesystem::path(opt.data_path).filename().string() << ','
        << fmt(est.params.alpha) << ',' << fmt(est.params.beta) << ','
        << fmt(est.params.dtv_global) << ',' << fmt(est.params.dtv_a) << ','
        << fmt(est.params.dtv_b) << ',' << fmt(bound0) << ',' << fmt(bound5) << '\n';
    write_file_atomic(opt.out_prefix + ".summary.csv", csv.str());

    Manifest manifest("params");
    manifest.add("data", opt.data_path);
    manifest.add_input_digest(opt.data_path);
    manifest.add("schema", opt.schema_path);
    manifest.add_input_digest(opt.schema_path);
    manifest.add("seed", opt.seed);
    manifest.add("lr", opt.lr);
    manifest.add("iters", std::uint64_t(opt.iters));
    manifest.write(opt.out_prefix + ".manifest.txt", timer.elapsed_ms());

    std::cout << "alpha=" << fmt(est.params.alpha) << " beta=" << fmt(est.params.beta)
              << " dtv_global=" << fmt(est.params.dtv_global) << " dtv_a="
              << fmt(est.params.dtv_a) << " dtv_b=" << fmt(est.params.dtv_b)
              << " bound(0)=" << fmt(bound0) << " bound(0.05)=" << fmt(bound5) << '\n';
    return 0;
}

namespace {

bounds::BoundParams read_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file " + path);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        kv[key] = std::stod(line.substr(eq + 1));
    }
    bounds::BoundParams params;
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error(path + ": missing key " + key);
        return it->second;
    };
    params.alpha = need("alpha");
    params.beta = need("beta");
    params.dtv_global = need("dtv_global");
    params.dtv_a = need("dtv_a");
    params.dtv_b = need("dtv_b");
    return params;
}

} // namespace

int cmd_bounds(const BoundsOptions& opt) {
    Stopwatch timer;
    Manifest manifest("bounds");

    bounds::BoundParams params;
    if (opt.params_file) {
        params = read_params_file(*opt.params_file);
        manifest.add("params_file", *opt.params_file);
        manifest.add_input_digest(*opt.params_file);
    } else if (opt.direct) {
        params = *opt.direct;
        manifest.add("params", "direct flags");
    } else if (opt.data_path) {
        params = estimate_params_from_data(*opt.data_path, opt.schema_path, opt.seed, opt.lr,
                                           opt.iters)
                     .params;
        manifest.add("data", *opt.data_path);
        manifest.add_input_digest(*opt.data_path);
        manifest.add("schema", opt.schema_path);
        manifest.add_input_digest(opt.schema_path);
        manifest.add("seed", opt.seed);
    } else {
        throw std::invalid_argument("bounds: need --params, direct parameter flags, or --data");
    }
    params.validate();

    const std::vector<double> grid = parse_grid(opt.eps_grid);
    const bounds::BoundCurve curve = bounds::bound_curve(params, grid);

    std::ostringstream csv;
    csv << "epsilon,thm2_value,active_branch,thm1_value,effective_value\n";
    for (std::size_t i = 0; i < curve.epsilons.size(); ++i) {
        const double thm2 = curve.eo_bound_values[i];
        const double effective = std::min(thm2, curve.unconstrained_value);
        csv << fmt(curve.epsilons[i]) << ',' << fmt(thm2) << ','
            << bounds::branch_name(curve.active_branch[i]) << ','
            << fmt(curve.unconstrained_value) << ',' << fmt(effective) << '\n';
    }
    write_file_atomic(opt.out_prefix + ".curve.csv", csv.str());

    manifest.add("alpha", params.alpha);
    manifest.add("beta", params.beta);
    manifest.add("dtv_global", params.dtv_global);
    manifest.add("dtv_a", params.dtv_a);
    manifest.add("dtv_b", params.dtv_b);
    manifest.add("eps_grid", opt.eps_grid);
    manifest.write(opt.out_prefix + ".manifest.txt", timer.elapsed_ms());

    std::cout << "wrote " << curve.epsilons.size() << " rows to " << opt.out_prefix
              << ".curve.csv\n";
    return 0;
}

int cmd_sweep(const SweepOptions& opt) {
    Stopwatch timer;
    const data::DatasetSchema schema = data::load_schema(opt.schema_path);
    const data::LoadResult loaded = data::load_csv(opt.data_path, schema);

    std::vector<fairtrain::RegularizerKind> kinds = opt.regularizers;
    if (kinds.empty())
        kinds = {fairtrain::RegularizerKind::FDivergence, fairtrain::RegularizerKind::FnrFprGap,
                 fairtrain::RegularizerKind::Covariance};

    struct Row {
        std::size_t kind_order;
        double lambda;
        std::uint64_t seed;
        fairtrain::TradeoffPoint pt;
    };
    std::vector<Row> rows;

    for (std::uint64_t seed : opt.seeds) {
        data::SplitResult parts = data::split(loaded.dataset, opt.train_fraction, seed);
        if (parts.test.size() == 0)
            throw std::runtime_error("sweep needs a non-empty test split");
        data::PreprocessReport report = loaded.report;
        data::standardize_train_test(parts.train, parts.test, report);

        fairtrain::TrainConfig cfg;
        cfg.learning_rate = opt.lr;
        cfg.epochs = opt.iters;
        cfg.seed = seed;
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            const std::vector<fairtrain::TradeoffPoint> points =
                fairtrain::sweep(parts.train, parts.test, kinds[k], opt.lambdas, cfg);
            for (const fairtrain::TradeoffPoint& pt : points)
                rows.push_back({k, pt.lambda, seed, pt});
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.kind_order != b.kind_order) return a.kind_order < b.kind_order;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.seed < b.seed;
    });

    std::ostringstream csv;
    csv << "regularizer,lambda,seed,train_acc,test_acc,train_deo,test_deo\n";
    for (const Row& row : rows) {
        csv << fairtrain::regularizer_name(kinds[row.kind_order]) << ',' << fmt(row.lambda)
            << ',' << row.seed << ',' << fmt(row.pt.train_accuracy) << ','
            << fmt(row.pt.test_accuracy) << ',' << fmt(row.pt.train_delta_eo) << ','
            << fmt(row.pt.test_delta_eo) << '\n';
    }
    write_file_atomic(opt.out_prefix + ".tradeoff.csv", csv.str());

    Manifest manifest("sweep");
    manifest.add("data", opt.data_path);
    manifest.add_input_digest(opt.data_path);
    manifest.add("schema", opt.schema_path);
    manifest.add_input_digest(opt.schema_path);
    { // seeds and lambdas as comma lists
        std::ostringstream seeds, lambdas, regs;
        for (std::size_t i = 0; i < opt.seeds.size(); ++i)
            seeds << (i ? "," : "") << opt.seeds[i];
        for (std::size_t i = 0; i < opt.lambdas.size(); ++i)
            lambdas << (i ? "," : "") << fmt(opt.lambdas[i]);
        for (std::size_t i = 0; i < kinds.size(); ++i)
            regs << (i ? "," : "") << fairtrain::regularizer_name(kinds[i]);
        manifest.add("seeds", seeds.str());
        manifest.add("lambdas", lambdas.str());
        manifest.add("regularizers", regs.str());
    }
    manifest.add("train_fraction", opt.train_fraction);
    manifest.add("lr", opt.lr);
    manifest.add("iters", std::uint64_t(opt.iters));
    manifest.write(opt.out_prefix + ".manifest.txt", timer.elapsed_ms());

    std::cout << "wrote " << rows.size() << " tradeoff rows to " << opt.out_prefix
              << ".tradeoff.csv\n";
    return 0;
}

int cmd_verify(const VerifyOptions& opt) {
    Stopwatch timer;
    const std::vector<double> grid = parse_grid(opt.eps_grid);

    std::ostringstream csv;
    csv << "seed,support_size,epsilon,lp_accuracy,thm2_value,thm1_value,effective_value,"
           "margin,status\n";
    std::size_t cases = 0, violations = 0;
    for (int i = 0; i < opt.num_seeds; ++i) {
        const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(i);
        const oracle::DiscreteJoint joint = oracle::random_joint(seed, opt.support_size);
        const bounds::BoundParams params = oracle::exact_params(joint);
        for (double eps : grid) {
            const oracle::FairOptimum lp = oracle::optimal_fair_accuracy(joint, eps, opt.lp_tol);
            const bounds::EoBoundValue thm2 = bounds::eo_bound(params, eps);
            const double thm1 = bounds::unconstrained_bound(params.alpha, params.dtv_global);
            const double effective = std::min(thm1, thm2.value);
            const double margin = effective - lp.accuracy;
            const bool ok = lp.accuracy <= effective + 1e-9;
            ++cases;
            if (!ok) ++violations;
            csv << seed << ',' << opt.support_size << ',' << fmt(eps) << ','
                << fmt(lp.accuracy) << ',' << fmt(thm2.value) << ',' << fmt(thm1) << ','
                << fmt(effective) << ',' << fmt(margin) << ',' << (ok ? "ok" : "VIOLATION")
                << '\n';
        }
    }
    write_file_atomic(opt.out_prefix + ".verify.csv", csv.str());

    Manifest manifest("verify");
    manifest.add("num_seeds", std::uint64_t(opt.num_seeds));
    manifest.add("base_seed", opt.seed);
    manifest.add("support_size", std::uint64_t(opt.support_size));
    manifest.add("eps_grid", opt.eps_grid);
    manifest.add("lp_tol", opt.lp_tol);
    manifest.write(opt.out_prefix + ".manifest.txt", timer.elapsed_ms());

    std::cout << "verified " << cases << " cases, " << violations << " violations\n";
    return violations == 0 ? 0 : 1;
}

int cmd_estimate_tv(const EstimateTvOptions& opt) {
    Stopwatch timer;
    const core::Matrix samples_p = load_sample_matrix(opt.p_path);
    const core::Matrix samples_q = load_sample_matrix(opt.q_path);

    divergence::EstimatorConfig cfg;
    cfg.learning_rate = opt.lr;
    cfg.max_iters = opt.iters;
    cfg.seed = opt.seed;
    const divergence::TvEstimate est =
        divergence::estimate_tv_variational(samples_p, samples_q, cfg);

    std::ostringstream csv;
    csv << "iteration,objective\n";
    for (std::size_t i = 0; i < est.final_objective_trace.size(); ++i)
        csv << i << ',' << fmt(est.final_objective_trace[i]) << '\n';
    write_file_atomic(opt.out_prefix + ".trace.csv", csv.str());

    Manifest manifest("estimate-tv");
    manifest.add("p", opt.p_path);
    manifest.add_input_digest(opt.p_path);
    manifest.add("q", opt.q_path);
    manifest.add_input_digest(opt.q_path);
    manifest.add("seed", opt.seed);
    manifest.add("lr", opt.lr);
    manifest.add("iters", std::uint64_t(opt.iters));
    manifest.add("value", est.value);
    manifest.write(opt.out_prefix + ".manifest.txt", timer.elapsed_ms());

    std::cout << "value=" << fmt(est.value) << " iterations=" << est.iterations_run
              << " seed=" << est.seed << '\n';
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"accuracy bounds under equalized-odds constraints: estimation, "
                 "training sweeps and exact verification"};
    app.require_subcommand(1);

    // --- params ---
    ParamsOptions params_opt;
    CLI::App* params = app.add_subcommand(
        "params", "estimate alpha, beta and the three TV distances from a dataset");
    params->add_option("--data", params_opt.data_path, "CSV data file")->required();
    params->add_option("--schema", params_opt.schema_path, "schema file")->required();
    params->add_option("--out", params_opt.out_prefix, "output path prefix")->required();
    params->add_option("--seed", params_opt.seed, "estimator seed");
    params->add_option("--lr", params_opt.lr, "critic learning rate");
    params->add_option("--iters", params_opt.iters, "critic iterations");

    // --- bounds ---
    BoundsOptions bounds_opt;
    std::string bounds_params_file;
    std::string bounds_data;
    double alpha = -1.0, beta = -1.0, dtv_global = -1.0, dtv_a = -1.0, dtv_b = -1.0;
    CLI::App* bounds_cmd =
        app.add_subcommand("bounds", "evaluate the accuracy bound curve over an epsilon grid");
    bounds_cmd->add_option("--params", bounds_params_file, "params file from `params`");
    bounds_cmd->add_option("--data", bounds_data, "CSV data file (estimate params first)");
    bounds_cmd->add_option("--schema", bounds_opt.schema_path, "schema file");
    bounds_cmd->add_option("--alpha", alpha, "P(Y=1)");
    bounds_cmd->add_option("--beta", beta, "P(Z=a)");
    bounds_cmd->add_option("--dtv-global", dtv_global, "d_TV(P1,P0)");
    bounds_cmd->add_option("--dtv-a", dtv_a, "d_TV(P1^a,P0^a)");
    bounds_cmd->add_option("--dtv-b", dtv_b, "d_TV(P1^b,P0^b)");
    bounds_cmd->add_option("--eps-grid", bounds_opt.eps_grid, "start:step:stop");
    bounds_cmd->add_option("--out", bounds_opt.out_prefix, "output path prefix")->required();
    bounds_cmd->add_option("--seed", bounds_opt.seed, "estimator seed");
    bounds_cmd->add_option("--lr", bounds_opt.lr, "critic learning rate");
    bounds_cmd->add_option("--iters", bounds_opt.iters, "critic iterations");

    // --- sweep ---
    SweepOptions sweep_opt;
    std::string sweep_regs = "c1,c2,c3";
    std::string sweep_lambdas = "0,0.5,1,2,5,10";
    std::string sweep_seeds = "1";
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "trace fairness-accuracy tradeoff points across a lambda grid");
    sweep_cmd->add_option("--data", sweep_opt.data_path, "CSV data file")->required();
    sweep_cmd->add_option("--schema", sweep_opt.schema_path, "schema file")->required();
    sweep_cmd->add_option("--out", sweep_opt.out_prefix, "output path prefix")->required();
    sweep_cmd->add_option("--regularizer", sweep_regs, "comma list of c1,c2,c3");
    sweep_cmd->add_option("--lambdas", sweep_lambdas, "comma list of lambda values");
    sweep_cmd->add_option("--seeds", sweep_seeds, "comma list of seeds");
    sweep_cmd->add_option("--train-fraction", sweep_opt.train_fraction, "train split fraction");
    sweep_cmd->add_option("--lr", sweep_opt.lr, "training learning rate");
    sweep_cmd->add_option("--iters", sweep_opt.iters, "training epochs");

    // --- verify ---
    VerifyOptions verify_opt;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "check LP-optimal fair accuracy against the bound on random joints");
    verify_cmd->add_option("--out", verify_opt.out_prefix, "output path prefix")->required();
    verify_cmd->add_option("--seeds", verify_opt.num_seeds, "number of random joints");
    verify_cmd->add_option("--k", verify_opt.support_size, "support size of each joint");
    verify_cmd->add_option("--eps-grid", verify_opt.eps_grid, "start:step:stop");
    verify_cmd->add_option("--lp-tol", verify_opt.lp_tol, "simplex pivot tolerance");
    verify_cmd->add_option("--seed", verify_opt.seed, "base seed");

    // --- estimate-tv ---
    EstimateTvOptions tv_opt;
    CLI::App* tv_cmd = app.add_subcommand(
        "estimate-tv", "variational TV estimate between two sample files");
    tv_cmd->add_option("--p", tv_opt.p_path, "samples from P (CSV)")->required();
    tv_cmd->add_option("--q", tv_opt.q_path, "samples from Q (CSV)")->required();
    tv_cmd->add_option("--out", tv_opt.out_prefix, "output path prefix")->required();
    tv_cmd->add_option("--seed", tv_opt.seed, "estimator seed");
    tv_cmd->add_option("--lr", tv_opt.lr, "critic learning rate");
    tv_cmd->add_option("--iters", tv_opt.iters, "critic iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (params->parsed()) return cmd_params(params_opt);
        if (bounds_cmd->parsed()) {
            if (!bounds_params_file.empty()) bounds_opt.params_file = bounds_params_file;
            if (!bounds_data.empty()) bounds_opt.data_path = bounds_data;
            if (alpha >= 0.0 || beta >= 0.0 || dtv_global >= 0.0 || dtv_a >= 0.0 ||
                dtv_b >= 0.0) {
                bounds::BoundParams direct;
                direct.alpha = alpha;
                direct.beta = beta;
                direct.dtv_global = dtv_global;
                direct.dtv_a = dtv_a;
                direct.dtv_b = dtv_b;
                bounds_opt.direct = direct;
            }
            return cmd_bounds(bounds_opt);
        }
        if (sweep_cmd->parsed()) {
            for (const std::string& name : [&] {
                     std::vector<std::string> parts;
                     std::istringstream ss(sweep_regs);
                     std::string f;
                     while (std::getline(ss, f, ',')) parts.push_back(f);
                     return parts;
                 }())
                sweep_opt.regularizers.push_back(fairtrain::regularizer_from_name(name));
            sweep_opt.lambdas = parse_double_list(sweep_lambdas);
            sweep_opt.seeds = parse_seed_list(sweep_seeds);
            return cmd_sweep(sweep_opt);
        }
        if (verify_cmd->parsed()) return cmd_verify(verify_opt);
        if (tv_cmd->parsed()) return cmd_estimate_tv(tv_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace fairbound::cli
