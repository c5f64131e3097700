#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace vargc::tool {

/// Command-line overrides.  A disengaged optional means "flag not given",
/// so the config-file value (or the built-in default) stands.  `sim_orders`
/// uses emptiness the same way because it binds a repeated flag.
struct FlagOverrides {
    // generator
    std::vector<int> sim_orders;  ///< empty = not given, else exactly 4
    std::optional<int> sim_n_samples;
    std::optional<double> sim_innovation_var;
    std::optional<double> sim_measurement_var;
    std::optional<double> sim_wavelet_sparsity;
    std::optional<double> sim_arfima_d;
    std::optional<int> sim_burn_in;
    std::optional<std::uint64_t> sim_seed;
    std::optional<double> sim_spectral_margin;
    std::optional<int> sim_wavelet_order;
    std::optional<std::string> sim_mode;

    // solver
    std::optional<std::string> fit_method;
    std::optional<int> m_bar;
    std::optional<double> lambda;
    std::optional<double> lambda_prime;
    std::optional<double> gamma;
    std::optional<double> gamma_prime;
    std::optional<double> kappa;
    std::optional<double> alpha;
    std::optional<double> rho1;
    std::optional<double> rho2;
    std::optional<double> rho3;
    std::optional<int> max_iters;
    std::optional<double> tol;
    std::optional<std::string> group_weights;
    std::optional<int> wavelet_order;
    std::optional<int> wavelet_levels;
    std::optional<bool> estimate_lag_noise;

    // influence analysis
    std::optional<std::string> gc_method;
    std::optional<int> gc_window;
    std::optional<int> gc_stride;
    std::optional<double> gc_confidence;
    std::optional<int> gc_blockwise_order;

    // noise sweep
    std::optional<int> sweep_points;
    std::optional<int> sweep_seeds;
    std::optional<double> sweep_noise_var_max;
};

/// Defaults, then the optional config file, then flag overrides; validates
/// the result.  Throws ConfigError on any problem.
ToolConfig effective_config(const std::optional<std::string>& config_path,
                            const FlagOverrides& flags);

/// Worker count for parallel commands, from the VARGC_THREADS environment
/// variable; 1 when unset.  Throws ConfigError on a malformed value.
int default_thread_count();

struct SimulateArgs {
    std::optional<std::string> config_path;
    FlagOverrides flags;
    std::string out;  ///< observed-series CSV
    std::optional<std::string> truth;       ///< default: out -> .truth.json
    std::optional<std::string> clean;       ///< default: out -> .clean.csv
    std::optional<std::string> excitation;  ///< default: out -> .excitation.csv
    std::optional<std::string> manifest;    ///< default: out -> .manifest.json
};
int cmd_simulate(const SimulateArgs& args);

struct FitArgs {
    std::optional<std::string> config_path;
    FlagOverrides flags;
    std::string input;  ///< series CSV
    std::string out;    ///< result JSON
    std::optional<std::string> trace;     ///< default: out -> .trace.csv
    std::optional<std::string> denoised;  ///< ssd only; omitted = not written
    std::optional<std::string> manifest;
};
int cmd_fit(const FitArgs& args);

struct GcArgs {
    std::optional<std::string> config_path;
    FlagOverrides flags;
    std::string input;
    std::string out;  ///< per-window trace CSV
    std::optional<std::string> summary;  ///< default: out -> .summary.json
    std::optional<std::string> manifest;
};
int cmd_gc(const GcArgs& args);

struct SweepArgs {
    std::optional<std::string> config_path;
    FlagOverrides flags;
    std::string out;  ///< (noise_var, method, nmse) CSV
    std::optional<std::string> manifest;
};
int cmd_sweep(const SweepArgs& args);

}  // namespace vargc::tool
