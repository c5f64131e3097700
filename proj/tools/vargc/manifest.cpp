#include "manifest.hpp"

#include <fstream>

#include "vargc/errors.hpp"
#include "vargc/io.hpp"

#ifndef VARGC_VERSION_STRING
#define VARGC_VERSION_STRING "unknown"
#endif

namespace vargc::tool {

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(path, to_hex(digest_file(path)));
}

void RunManifest::add_output(const std::string& path) {
    outputs.emplace_back(path, to_hex(digest_file(path)));
}

JsonValue config_json(const ToolConfig& cfg) {
    JsonValue sim = JsonValue::object();
    JsonValue orders = JsonValue::array();
    for (const int o : cfg.sim.orders) orders.push(o);
    sim.set("orders", std::move(orders));
    sim.set("n_samples", cfg.sim.n_samples);
    sim.set("innovation_var", cfg.sim.innovation_var);
    sim.set("measurement_var", cfg.sim.measurement_var);
    sim.set("wavelet_sparsity", cfg.sim.wavelet_sparsity);
    sim.set("arfima_d", cfg.sim.arfima_d);
    sim.set("burn_in", cfg.sim.burn_in);
    sim.set("seed", cfg.sim.seed);
    sim.set("spectral_margin", cfg.sim.spectral_margin);
    sim.set("wavelet_order", cfg.sim.wavelet_order);
    sim.set("mode", sim_mode_name(cfg.sim.mode));

    JsonValue fit = JsonValue::object();
    fit.set("method", cfg.fit_method);
    fit.set("m_bar", cfg.m_bar);
    fit.set("lambda", cfg.fit.lambda);
    fit.set("lambda_prime", cfg.fit.lambda_prime);
    fit.set("gamma", cfg.fit.gamma);
    fit.set("gamma_prime", cfg.fit.gamma_prime);
    fit.set("kappa", cfg.fit.kappa);
    fit.set("alpha", cfg.fit.alpha);
    fit.set("rho1", cfg.fit.rho1);
    fit.set("rho2", cfg.fit.rho2);
    fit.set("rho3", cfg.fit.rho3);
    fit.set("max_iters", cfg.fit.max_iters);
    fit.set("tol", cfg.fit.tol);
    fit.set("group_weights", group_weights_name(cfg.fit.group_weights));
    fit.set("wavelet_order", cfg.fit.wavelet_order);
    fit.set("wavelet_levels", cfg.fit.wavelet_levels);
    fit.set("estimate_lag_noise", cfg.fit.estimate_lag_noise);

    JsonValue gc = JsonValue::object();
    gc.set("method", cfg.gc_method);
    gc.set("window", cfg.gc_window);
    gc.set("stride", cfg.gc_stride);
    gc.set("confidence", cfg.gc_confidence);
    gc.set("blockwise_order", cfg.gc_blockwise_order);

    JsonValue sweep = JsonValue::object();
    sweep.set("points", cfg.sweep_points);
    sweep.set("seeds", cfg.sweep_seeds);
    sweep.set("noise_var_max", cfg.sweep_noise_var_max);

    JsonValue root = JsonValue::object();
    root.set("sim", std::move(sim));
    root.set("fit", std::move(fit));
    root.set("gc", std::move(gc));
    root.set("sweep", std::move(sweep));
    return root;
}

JsonValue manifest_json(const RunManifest& m) {
    JsonValue root = JsonValue::object();
    root.set("command", m.command);
    root.set("library_version", std::string(VARGC_VERSION_STRING));
    root.set("seed", m.seed);
    root.set("config", config_json(m.config));

    JsonValue inputs = JsonValue::object();
    for (const auto& [path, digest] : m.inputs) inputs.set(path, digest);
    root.set("inputs", std::move(inputs));

    JsonValue outputs = JsonValue::object();
    for (const auto& [path, digest] : m.outputs) outputs.set(path, digest);
    root.set("outputs", std::move(outputs));

    JsonValue timings = JsonValue::object();
    for (const auto& [stage, ms] : m.timings_ms) timings.set(stage, ms);
    root.set("timings_ms", std::move(timings));
    return root;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw InvalidInput("failed writing output file '" + path + "'");
}

void write_manifest(const std::string& path, const RunManifest& m) {
    write_text_file(path, manifest_json(m).dump());
}

}  // namespace vargc::tool
