#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "config.hpp"
#include "vargc/errors.hpp"

namespace tool = vargc::tool;

namespace {

void add_config_flag(CLI::App* cmd, std::optional<std::string>& path) {
    cmd->add_option("--config", path,
                    "JSON config file; flags override file values");
}

void add_sim_flags(CLI::App* cmd, tool::FlagOverrides& f) {
    cmd->add_option("--orders", f.sim_orders,
                    "true lag depth per block: yy yx xy xx")
        ->expected(4);
    cmd->add_option("--samples", f.sim_n_samples, "series length");
    cmd->add_option("--innovation-var", f.sim_innovation_var,
                    "variance of the planted excitation coefficients");
    cmd->add_option("--measurement-var", f.sim_measurement_var,
                    "additive observation-noise variance");
    cmd->add_option("--wavelet-sparsity", f.sim_wavelet_sparsity,
                    "fraction of excitation wavelet coefficients left zero");
    cmd->add_option("--arfima-d", f.sim_arfima_d,
                    "long-memory exponent (arfima mode)");
    cmd->add_option("--burn-in", f.sim_burn_in, "discarded warm-up samples");
    cmd->add_option("--seed", f.sim_seed, "generator seed");
    cmd->add_option("--spectral-margin", f.sim_spectral_margin,
                    "keep characteristic roots below 1 - margin");
    cmd->add_option("--sim-wavelet-order", f.sim_wavelet_order,
                    "wavelet family order of the planted excitation");
    cmd->add_option("--mode", f.sim_mode, "generator mode: var | arfima");
}

void add_fit_flags(CLI::App* cmd, tool::FlagOverrides& f, bool with_method) {
    if (with_method)
        cmd->add_option("--method", f.fit_method, "solver: ss | ssd | ols");
    cmd->add_option("--m-bar", f.m_bar, "maximum lag order per block");
    cmd->add_option("--lambda", f.lambda, "nested-group penalty weight");
    cmd->add_option("--lambda-prime", f.lambda_prime,
                    "group penalty weight for the channel-decoupled fit");
    cmd->add_option("--gamma", f.gamma, "stability penalty weight");
    cmd->add_option("--gamma-prime", f.gamma_prime,
                    "stability penalty weight for the channel-decoupled fit");
    cmd->add_option("--kappa", f.kappa, "sparse-excitation penalty weight");
    cmd->add_option("--alpha", f.alpha, "data-fidelity weight (denoiser)");
    cmd->add_option("--rho1", f.rho1, "coefficient-copy coupling weight");
    cmd->add_option("--rho2", f.rho2, "latent-copy coupling weight");
    cmd->add_option("--rho3", f.rho3, "stability-copy coupling weight");
    cmd->add_option("--max-iters", f.max_iters, "iteration cap");
    cmd->add_option("--tol", f.tol, "scaled-residual stopping tolerance");
    cmd->add_option("--group-weights", f.group_weights,
                    "group weighting: sqrt_size | uniform");
    cmd->add_option("--wavelet-order", f.wavelet_order,
                    "wavelet family order used by the denoiser");
    cmd->add_option("--wavelet-levels", f.wavelet_levels,
                    "transform depth (0 = automatic)");
    cmd->add_option("--estimate-lag-noise", f.estimate_lag_noise,
                    "denoiser also corrects the lag matrix (true | false)");
}

void add_gc_flags(CLI::App* cmd, tool::FlagOverrides& f) {
    cmd->add_option("--method", f.gc_method,
                    "analysis: direct | denoise | blockwise");
    cmd->add_option("--window", f.gc_window,
                    "sliding-window length (0 = whole series)");
    cmd->add_option("--stride", f.gc_stride, "window step (0 = window length)");
    cmd->add_option("--confidence", f.gc_confidence,
                    "test confidence level in (0, 1)");
    cmd->add_option("--blockwise-order", f.gc_blockwise_order,
                    "fixed lag depth of the blockwise baseline (0 = select)");
}

void add_sweep_flags(CLI::App* cmd, tool::FlagOverrides& f) {
    cmd->add_option("--points", f.sweep_points, "noise-variance grid size");
    cmd->add_option("--seeds", f.sweep_seeds, "replicates per grid point");
    cmd->add_option("--noise-var-max", f.sweep_noise_var_max,
                    "largest measurement-noise variance on the grid");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-channel autoregressive modelling with joint order selection,\n"
                 "stability control, measurement-noise handling, and directional\n"
                 "influence tests."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(VARGC_VERSION_STRING));

    tool::SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "Generate a synthetic series with known ground truth");
    add_config_flag(sim, sim_args.config_path);
    add_sim_flags(sim, sim_args.flags);
    sim->add_option("--out", sim_args.out, "observed-series CSV path")->required();
    sim->add_option("--truth", sim_args.truth, "ground-truth JSON path");
    sim->add_option("--clean", sim_args.clean, "noise-free series CSV path");
    sim->add_option("--excitation", sim_args.excitation, "excitation CSV path");
    sim->add_option("--manifest", sim_args.manifest, "run-manifest JSON path");

    tool::FitArgs fit_args;
    CLI::App* fit = app.add_subcommand("fit", "Fit a model to a series CSV");
    add_config_flag(fit, fit_args.config_path);
    add_fit_flags(fit, fit_args.flags, /*with_method=*/true);
    fit->add_option("--input", fit_args.input, "series CSV path")->required();
    fit->add_option("--out", fit_args.out, "result JSON path")->required();
    fit->add_option("--trace", fit_args.trace, "convergence-trace CSV path");
    fit->add_option("--denoised", fit_args.denoised,
                    "denoised-targets CSV path (ssd method only)");
    fit->add_option("--manifest", fit_args.manifest, "run-manifest JSON path");

    tool::GcArgs gc_args;
    CLI::App* gc = app.add_subcommand(
        "gc", "Directional influence tests, optionally over sliding windows");
    add_config_flag(gc, gc_args.config_path);
    add_fit_flags(gc, gc_args.flags, /*with_method=*/false);
    add_gc_flags(gc, gc_args.flags);
    gc->add_option("--input", gc_args.input, "series CSV path")->required();
    gc->add_option("--out", gc_args.out, "per-window trace CSV path")->required();
    gc->add_option("--summary", gc_args.summary, "summary JSON path");
    gc->add_option("--manifest", gc_args.manifest, "run-manifest JSON path");

    tool::SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Measurement-noise sweep comparing the denoising solver "
                 "against the smooth-then-fit pipeline");
    add_config_flag(sweep, sweep_args.config_path);
    add_sim_flags(sweep, sweep_args.flags);
    add_fit_flags(sweep, sweep_args.flags, /*with_method=*/false);
    add_sweep_flags(sweep, sweep_args.flags);
    sweep->add_option("--out", sweep_args.out, "sweep CSV path")->required();
    sweep->add_option("--manifest", sweep_args.manifest, "run-manifest JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sim) return tool::cmd_simulate(sim_args);
        if (*fit) return tool::cmd_fit(fit_args);
        if (*gc) return tool::cmd_gc(gc_args);
        if (*sweep) return tool::cmd_sweep(sweep_args);
    } catch (const tool::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vargc::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vargc::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
