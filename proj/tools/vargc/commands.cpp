#include "commands.hpp"

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "jwriter.hpp"
#include "manifest.hpp"
#include "vargc/baselines.hpp"
#include "vargc/companion.hpp"
#include "vargc/design.hpp"
#include "vargc/granger.hpp"
#include "vargc/io.hpp"
#include "vargc/simulate.hpp"
#include "vargc/ss_admm.hpp"
#include "vargc/ssd_admm.hpp"

namespace vargc::tool {

namespace {

void apply_overrides(const FlagOverrides& f, ToolConfig& cfg) {
    if (!f.sim_orders.empty()) {
        if (f.sim_orders.size() != 4)
            throw ConfigError("config: field 'sim.orders' must have 4 entries");
        cfg.sim.orders = {f.sim_orders[0], f.sim_orders[1], f.sim_orders[2],
                          f.sim_orders[3]};
    }
    if (f.sim_n_samples) cfg.sim.n_samples = *f.sim_n_samples;
    if (f.sim_innovation_var) cfg.sim.innovation_var = *f.sim_innovation_var;
    if (f.sim_measurement_var) cfg.sim.measurement_var = *f.sim_measurement_var;
    if (f.sim_wavelet_sparsity) cfg.sim.wavelet_sparsity = *f.sim_wavelet_sparsity;
    if (f.sim_arfima_d) cfg.sim.arfima_d = *f.sim_arfima_d;
    if (f.sim_burn_in) cfg.sim.burn_in = *f.sim_burn_in;
    if (f.sim_seed) cfg.sim.seed = *f.sim_seed;
    if (f.sim_spectral_margin) cfg.sim.spectral_margin = *f.sim_spectral_margin;
    if (f.sim_wavelet_order) cfg.sim.wavelet_order = *f.sim_wavelet_order;
    if (f.sim_mode) cfg.sim.mode = parse_sim_mode(*f.sim_mode);

    if (f.fit_method) cfg.fit_method = *f.fit_method;
    if (f.m_bar) cfg.m_bar = *f.m_bar;
    if (f.lambda) cfg.fit.lambda = *f.lambda;
    if (f.lambda_prime) cfg.fit.lambda_prime = *f.lambda_prime;
    if (f.gamma) cfg.fit.gamma = *f.gamma;
    if (f.gamma_prime) cfg.fit.gamma_prime = *f.gamma_prime;
    if (f.kappa) cfg.fit.kappa = *f.kappa;
    if (f.alpha) cfg.fit.alpha = *f.alpha;
    if (f.rho1) cfg.fit.rho1 = *f.rho1;
    if (f.rho2) cfg.fit.rho2 = *f.rho2;
    if (f.rho3) cfg.fit.rho3 = *f.rho3;
    if (f.max_iters) cfg.fit.max_iters = *f.max_iters;
    if (f.tol) cfg.fit.tol = *f.tol;
    if (f.group_weights) cfg.fit.group_weights = parse_group_weights(*f.group_weights);
    if (f.wavelet_order) cfg.fit.wavelet_order = *f.wavelet_order;
    if (f.wavelet_levels) cfg.fit.wavelet_levels = *f.wavelet_levels;
    if (f.estimate_lag_noise) cfg.fit.estimate_lag_noise = *f.estimate_lag_noise;

    if (f.gc_method) cfg.gc_method = *f.gc_method;
    if (f.gc_window) cfg.gc_window = *f.gc_window;
    if (f.gc_stride) cfg.gc_stride = *f.gc_stride;
    if (f.gc_confidence) cfg.gc_confidence = *f.gc_confidence;
    if (f.gc_blockwise_order) cfg.gc_blockwise_order = *f.gc_blockwise_order;

    if (f.sweep_points) cfg.sweep_points = *f.sweep_points;
    if (f.sweep_seeds) cfg.sweep_seeds = *f.sweep_seeds;
    if (f.sweep_noise_var_max) cfg.sweep_noise_var_max = *f.sweep_noise_var_max;
}

/// out with its extension replaced, e.g. derive("run.csv", ".truth.json").
std::string derive(const std::string& out, const std::string& ext) {
    return std::filesystem::path(out).replace_extension(ext).string();
}

JsonValue matrix_json(const Eigen::MatrixXd& M) {
    JsonValue rows = JsonValue::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        JsonValue row = JsonValue::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push(M(i, j));
        rows.push(std::move(row));
    }
    return rows;
}

JsonValue coefficients_json(const VarCoefficients& coeffs) {
    JsonValue obj = JsonValue::object();
    obj.set("m_bar", coeffs.m_bar);
    obj.set("matrix", matrix_json(coeffs.A));
    return obj;
}

JsonValue orders_json(const std::array<int, 4>& orders) {
    return JsonValue::array()
        .push(orders[0])
        .push(orders[1])
        .push(orders[2])
        .push(orders[3]);
}

std::string trace_csv_text(const std::vector<double>& residuals,
                           const std::vector<double>& objectives) {
    std::string csv = "iter,residual,objective\n";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        csv += std::to_string(i + 1);
        csv += ',';
        csv += format_double(residuals[i]);
        csv += ',';
        csv += i < objectives.size() ? format_double(objectives[i]) : "nan";
        csv += '\n';
    }
    return csv;
}

JsonValue direction_json(const DirectionalTest& t) {
    JsonValue obj = JsonValue::object();
    obj.set("f_stat", t.f_stat);
    obj.set("f_critical", t.f_critical);
    obj.set("p_value", t.p_value);
    obj.set("df_num", t.df_num);
    obj.set("df_den", static_cast<std::int64_t>(t.df_den));
    obj.set("params_full", t.params_full);
    obj.set("params_reduced", t.params_reduced);
    obj.set("rss_full", t.rss_full);
    obj.set("rss_reduced", t.rss_reduced);
    obj.set("significant", t.significant);
    obj.set("valid", t.valid);
    return obj;
}

/// Runs fn(k) for k in [0, count) on `threads` workers (round-robin);
/// results must be written into per-index slots by fn itself.  The first
/// exception wins and is rethrown after all workers join.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int k = t; k < count; k += threads) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ToolConfig effective_config(const std::optional<std::string>& config_path,
                            const FlagOverrides& flags) {
    ToolConfig cfg;
    if (config_path) apply_config_file(*config_path, cfg);
    apply_overrides(flags, cfg);
    validate_tool_config(cfg);
    cfg.sim.validate();
    cfg.fit.validate();
    return cfg;
}

int default_thread_count() {
    const char* env = std::getenv("VARGC_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || v < 1 || v > 1024)
        throw ConfigError("VARGC_THREADS must be a positive integer");
    return static_cast<int>(v);
}

int cmd_simulate(const SimulateArgs& args) {
    const ToolConfig cfg = effective_config(args.config_path, args.flags);
    const std::string truth_path = args.truth.value_or(derive(args.out, ".truth.json"));
    const std::string clean_path = args.clean.value_or(derive(args.out, ".clean.csv"));
    const std::string exc_path =
        args.excitation.value_or(derive(args.out, ".excitation.csv"));
    const std::string manifest_path =
        args.manifest.value_or(derive(args.out, ".manifest.json"));

    RunManifest man;
    man.command = "simulate";
    man.config = cfg;
    man.seed = cfg.sim.seed;
    if (args.config_path) man.add_input(*args.config_path);

    Stopwatch gen_clock;
    const GroundTruth g = assemble_observation(cfg.sim);
    man.timings_ms.emplace_back("generate", gen_clock.elapsed_ms());

    Stopwatch io_clock;
    write_series_csv(args.out, g.observed);
    write_series_csv(clean_path, g.clean);
    write_matrix_csv(exc_path, g.excitation);

    JsonValue truth = JsonValue::object();
    truth.set("mode", sim_mode_name(cfg.sim.mode));
    truth.set("seed", cfg.sim.seed);
    truth.set("n_samples", static_cast<std::int64_t>(g.observed.n_samples()));
    truth.set("orders", orders_json(g.orders));
    truth.set("spectral_radius", g.spectral_radius);
    truth.set("measurement_var", cfg.sim.measurement_var);
    truth.set("coefficients", coefficients_json(g.coefficients));
    JsonValue files = JsonValue::object();
    files.set("observed", args.out);
    files.set("clean", clean_path);
    files.set("excitation", exc_path);
    truth.set("files", std::move(files));
    write_text_file(truth_path, truth.dump());
    man.timings_ms.emplace_back("write", io_clock.elapsed_ms());

    man.add_output(args.out);
    man.add_output(clean_path);
    man.add_output(exc_path);
    man.add_output(truth_path);
    write_manifest(manifest_path, man);
    return 0;
}

int cmd_fit(const FitArgs& args) {
    const ToolConfig cfg = effective_config(args.config_path, args.flags);
    const std::string trace_path = args.trace.value_or(derive(args.out, ".trace.csv"));
    const std::string manifest_path =
        args.manifest.value_or(derive(args.out, ".manifest.json"));

    RunManifest man;
    man.command = "fit";
    man.config = cfg;
    man.seed = cfg.sim.seed;
    if (args.config_path) man.add_input(*args.config_path);
    man.add_input(args.input);

    const BivariateSeries series = read_series_csv(args.input);
    const LagDesign design = build_lag_design(series, cfg.m_bar);

    JsonValue result = JsonValue::object();
    result.set("method", cfg.fit_method);
    result.set("input", args.input);
    result.set("n_samples", static_cast<std::int64_t>(series.n_samples()));
    result.set("m_bar", cfg.m_bar);

    Stopwatch fit_clock;
    std::vector<double> residuals;
    std::vector<double> objectives;
    if (cfg.fit_method == "ssd") {
        const DenoiseResult dr = fit_denoise(design, cfg.fit);
        result.set("orders", orders_json(dr.orders));
        result.set("rss", JsonValue::array().push(dr.rss(0)).push(dr.rss(1)));
        result.set("iterations", dr.iterations);
        result.set("converged", dr.converged);
        result.set("oscillation_stop", dr.oscillation_stop);
        result.set("ridge_fallback", dr.ridge_fallback);
        result.set("identity_error_max", dr.identity_error_max);
        result.set("companion_radius", eigen_radius(dr.coefficients));
        result.set("coefficients", coefficients_json(dr.coefficients));
        residuals = dr.residual_history;
        objectives = dr.objective_history;
        if (args.denoised) {
            // Denoised targets: row t is the cleaned sample m_bar + t.
            BivariateSeries denoised(dr.Y_clean.row(0).transpose(),
                                     dr.Y_clean.row(1).transpose());
            write_series_csv(*args.denoised, denoised);
        }
    } else {
        const FitResult fr = cfg.fit_method == "ols" ? ols_fit(design)
                                                     : fit_unrestricted(design, cfg.fit);
        result.set("orders", orders_json(fr.orders));
        result.set("rss", JsonValue::array().push(fr.rss(0)).push(fr.rss(1)));
        result.set("iterations", fr.iterations);
        result.set("converged", fr.converged);
        result.set("ridge_fallback", fr.ridge_fallback);
        result.set("companion_radius", eigen_radius(fr.coefficients));
        if (fr.stability_copy.size() > 0)
            result.set("stability_spectral_norm", spectral_norm(fr.stability_copy));
        result.set("coefficients", coefficients_json(fr.coefficients));
        residuals = fr.residual_history;
        objectives = fr.objective_history;
    }
    man.timings_ms.emplace_back("fit", fit_clock.elapsed_ms());

    result.set("trace_csv", trace_path);
    write_text_file(trace_path, trace_csv_text(residuals, objectives));
    if (args.denoised) result.set("denoised_csv", *args.denoised);
    write_text_file(args.out, result.dump());

    man.add_output(args.out);
    man.add_output(trace_path);
    if (args.denoised) man.add_output(*args.denoised);
    write_manifest(manifest_path, man);
    return 0;
}

int cmd_gc(const GcArgs& args) {
    const ToolConfig cfg = effective_config(args.config_path, args.flags);
    const std::string summary_path =
        args.summary.value_or(derive(args.out, ".summary.json"));
    const std::string manifest_path =
        args.manifest.value_or(derive(args.out, ".manifest.json"));

    RunManifest man;
    man.command = "gc";
    man.config = cfg;
    man.seed = cfg.sim.seed;
    if (args.config_path) man.add_input(*args.config_path);
    man.add_input(args.input);

    const BivariateSeries series = read_series_csv(args.input);
    const Eigen::Index n = series.n_samples();
    const Eigen::Index window = cfg.gc_window == 0 ? n : cfg.gc_window;
    const Eigen::Index stride = cfg.gc_stride == 0 ? window : cfg.gc_stride;
    if (window < 4 * static_cast<Eigen::Index>(cfg.m_bar))
        throw ConfigError("config: field 'gc.window' must be at least 4 * m_bar (" +
                          std::to_string(4 * cfg.m_bar) + ")");

    const GcMethod method = parse_gc_method(cfg.gc_method);
    Stopwatch gc_clock;
    const GcTrace trace =
        gc_trace(series, method, window, stride, cfg.m_bar, cfg.fit,
                 cfg.gc_confidence, default_thread_count(), cfg.gc_blockwise_order);
    man.timings_ms.emplace_back("analyze", gc_clock.elapsed_ms());

    std::string csv =
        "start,t_eff,xy_f,xy_crit,xy_p,xy_significant,xy_valid,"
        "yx_f,yx_crit,yx_p,yx_significant,yx_valid\n";
    int xy_sig = 0, yx_sig = 0, xy_valid = 0, yx_valid = 0;
    JsonValue windows = JsonValue::array();
    for (std::size_t i = 0; i < trace.reports.size(); ++i) {
        const GcReport& r = trace.reports[i];
        csv += std::to_string(trace.starts[i]);
        csv += ',' + std::to_string(r.t_eff);
        for (const DirectionalTest* t : {&r.x_to_y, &r.y_to_x}) {
            csv += ',' + format_double(t->f_stat);
            csv += ',' + format_double(t->f_critical);
            csv += ',' + format_double(t->p_value);
            csv += ',' + std::string(t->significant ? "1" : "0");
            csv += ',' + std::string(t->valid ? "1" : "0");
        }
        csv += '\n';
        xy_sig += r.x_to_y.significant ? 1 : 0;
        yx_sig += r.y_to_x.significant ? 1 : 0;
        xy_valid += r.x_to_y.valid ? 1 : 0;
        yx_valid += r.y_to_x.valid ? 1 : 0;

        JsonValue w = JsonValue::object();
        w.set("start", static_cast<std::int64_t>(trace.starts[i]));
        w.set("t_eff", static_cast<std::int64_t>(r.t_eff));
        w.set("orders_full", orders_json(r.orders_full));
        w.set("orders_reduced", orders_json(r.orders_reduced));
        w.set("x_to_y", direction_json(r.x_to_y));
        w.set("y_to_x", direction_json(r.y_to_x));
        windows.push(std::move(w));
    }
    write_text_file(args.out, csv);

    JsonValue summary = JsonValue::object();
    summary.set("method", cfg.gc_method);
    summary.set("m_bar", cfg.m_bar);
    summary.set("window", static_cast<std::int64_t>(window));
    summary.set("stride", static_cast<std::int64_t>(stride));
    summary.set("confidence", cfg.gc_confidence);
    summary.set("n_windows", static_cast<std::int64_t>(trace.reports.size()));
    JsonValue agg = JsonValue::object();
    agg.set("x_to_y_significant", xy_sig);
    agg.set("y_to_x_significant", yx_sig);
    agg.set("x_to_y_valid", xy_valid);
    agg.set("y_to_x_valid", yx_valid);
    summary.set("counts", std::move(agg));
    summary.set("trace_csv", args.out);
    summary.set("windows", std::move(windows));
    write_text_file(summary_path, summary.dump());

    man.add_output(args.out);
    man.add_output(summary_path);
    write_manifest(manifest_path, man);
    return 0;
}

int cmd_sweep(const SweepArgs& args) {
    const ToolConfig cfg = effective_config(args.config_path, args.flags);
    const std::string manifest_path =
        args.manifest.value_or(derive(args.out, ".manifest.json"));

    RunManifest man;
    man.command = "sweep";
    man.config = cfg;
    man.seed = cfg.sim.seed;
    if (args.config_path) man.add_input(*args.config_path);

    const int points = cfg.sweep_points;
    const int seeds = cfg.sweep_seeds;
    std::vector<double> noise_var(points);
    for (int i = 0; i < points; ++i)
        noise_var[i] = points == 1
                           ? 0.0
                           : cfg.sweep_noise_var_max * i / (points - 1);

    // One work unit per (grid point, seed); per-unit scores land in fixed
    // slots so the reduction below is order independent of the schedule.
    std::vector<double> ssd_score(points * seeds, 0.0);
    std::vector<double> tv_score(points * seeds, 0.0);
    Stopwatch sweep_clock;
    parallel_for(points * seeds, default_thread_count(), [&](int k) {
        const int i = k / seeds;
        const int s = k % seeds;
        SimConfig sc = cfg.sim;
        sc.measurement_var = noise_var[i];
        sc.seed = cfg.sim.seed + static_cast<std::uint64_t>(s);
        const GroundTruth g = assemble_observation(sc);
        const Eigen::MatrixXd reference = autoregressive_component(g, cfg.m_bar);

        const LagDesign observed = build_lag_design(g.observed, cfg.m_bar);
        const DenoiseResult dr = fit_denoise(observed, cfg.fit);
        ssd_score[k] = nmse(dr.coefficients.A * dr.H_clean, reference);

        const double w = tv_weight_by_validation(g.observed, cfg.m_bar);
        const BivariateSeries smoothed = tv_denoise(g.observed, w);
        const LagDesign denoised = build_lag_design(smoothed, cfg.m_bar);
        const FitResult fr = fit_unrestricted(denoised, cfg.fit);
        tv_score[k] = nmse(fr.coefficients.A * denoised.H, reference);
    });
    man.timings_ms.emplace_back("sweep", sweep_clock.elapsed_ms());

    std::string csv = "noise_var,method,nmse\n";
    for (int i = 0; i < points; ++i) {
        double ssd_mean = 0.0, tv_mean = 0.0;
        for (int s = 0; s < seeds; ++s) {
            ssd_mean += ssd_score[i * seeds + s];
            tv_mean += tv_score[i * seeds + s];
        }
        ssd_mean /= seeds;
        tv_mean /= seeds;
        csv += format_double(noise_var[i]) + ",ssd," + format_double(ssd_mean) + '\n';
        csv += format_double(noise_var[i]) + ",tv_ss," + format_double(tv_mean) + '\n';
    }
    write_text_file(args.out, csv);

    man.add_output(args.out);
    write_manifest(manifest_path, man);
    return 0;
}

}  // namespace vargc::tool
