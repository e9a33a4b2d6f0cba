#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairbound/bounds.hpp"
#include "fairbound/fairtrain.hpp"

namespace fairbound::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// "start:step:stop" -> inclusive ascending grid
std::vector<double> parse_grid(const std::string& spec);
std::vector<double> parse_double_list(const std::string& csv);
std::vector<std::uint64_t> parse_seed_list(const std::string& csv);

/// FNV-1a 64-bit digest of a file's bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

/// Sidecar audit record emitted with every output artifact. Reruns with
/// identical inputs and seeds produce identical manifests except for the
/// trailing duration line.
class Manifest {
  public:
    explicit Manifest(std::string command);
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, std::uint64_t value);
    void add_input_digest(const std::string& path);
    void write(const std::string& path, double duration_ms) const;

  private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct ParamsOptions {
    std::string data_path;
    std::string schema_path;
    std::string out_prefix;
    std::uint64_t seed = 1;
    double lr = 0.1;
    int iters = 5000;
};
int cmd_params(const ParamsOptions& opt);

struct BoundsOptions {
    std::optional<std::string> params_file; // key-value file from cmd_params
    std::optional<bounds::BoundParams> direct;
    std::optional<std::string> data_path; // estimate params from data instead
    std::string schema_path;
    std::string eps_grid = "0:0.01:0.5";
    std::string out_prefix;
    std::uint64_t seed = 1;
    double lr = 0.1;
    int iters = 5000;
};
int cmd_bounds(const BoundsOptions& opt);

struct SweepOptions {
    std::string data_path;
    std::string schema_path;
    std::string out_prefix;
    std::vector<fairtrain::RegularizerKind> regularizers; // default: all three
    std::vector<double> lambdas = {0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    std::vector<std::uint64_t> seeds = {1};
    double train_fraction = 0.7;
    double lr = 0.05;
    int iters = 2000;
};
int cmd_sweep(const SweepOptions& opt);

struct VerifyOptions {
    std::string out_prefix;
    int num_seeds = 200;
    std::size_t support_size = 6;
    std::string eps_grid = "0:0.05:0.5";
    double lp_tol = 1e-10;
    std::uint64_t seed = 1; // base seed for joint generation
};
int cmd_verify(const VerifyOptions& opt);

struct EstimateTvOptions {
    std::string p_path;
    std::string q_path;
    std::string out_prefix;
    std::uint64_t seed = 1;
    double lr = 0.1;
    int iters = 5000;
};
int cmd_estimate_tv(const EstimateTvOptions& opt);

/// Full argv entry point used by the binary; returns the process exit code.
int run_cli(int argc, const char* const* argv);

} // namespace fairbound::cli
