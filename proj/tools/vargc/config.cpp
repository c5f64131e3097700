#include "config.hpp"

#include <fstream>
#include <json.hpp>

namespace vargc::tool {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError("config: field '" + field + "' " + why);
}

[[noreturn]] void unknown(const std::string& field) {
    throw ConfigError("config: unknown field '" + field + "'");
}

double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) fail(field, "must be an integer");
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& field) {
    if (!v.is_boolean()) fail(field, "must be true or false");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& field) {
    if (!v.is_string()) fail(field, "must be a string");
    return v.get<std::string>();
}

void apply_sim(const json& sec, SimConfig& sim) {
    for (const auto& [key, value] : sec.items()) {
        const std::string field = "sim." + key;
        if (key == "orders") {
            if (!value.is_array() || value.size() != 4)
                fail(field, "must be an array of 4 integers");
            for (int k = 0; k < 4; ++k) sim.orders[k] = as_int(value[k], field);
        } else if (key == "n_samples") {
            sim.n_samples = as_int(value, field);
        } else if (key == "innovation_var") {
            sim.innovation_var = as_number(value, field);
        } else if (key == "measurement_var") {
            sim.measurement_var = as_number(value, field);
        } else if (key == "wavelet_sparsity") {
            sim.wavelet_sparsity = as_number(value, field);
        } else if (key == "arfima_d") {
            sim.arfima_d = as_number(value, field);
        } else if (key == "burn_in") {
            sim.burn_in = as_int(value, field);
        } else if (key == "seed") {
            if (!value.is_number_integer()) fail(field, "must be an integer");
            sim.seed = value.get<std::uint64_t>();
        } else if (key == "spectral_margin") {
            sim.spectral_margin = as_number(value, field);
        } else if (key == "wavelet_order") {
            sim.wavelet_order = as_int(value, field);
        } else if (key == "mode") {
            sim.mode = parse_sim_mode(as_string(value, field));
        } else {
            unknown(field);
        }
    }
}

void apply_fit(const json& sec, ToolConfig& cfg) {
    HyperParams& hp = cfg.fit;
    for (const auto& [key, value] : sec.items()) {
        const std::string field = "fit." + key;
        if (key == "method") {
            cfg.fit_method = as_string(value, field);
        } else if (key == "m_bar") {
            cfg.m_bar = as_int(value, field);
        } else if (key == "lambda") {
            hp.lambda = as_number(value, field);
        } else if (key == "lambda_prime") {
            hp.lambda_prime = as_number(value, field);
        } else if (key == "gamma") {
            hp.gamma = as_number(value, field);
        } else if (key == "gamma_prime") {
            hp.gamma_prime = as_number(value, field);
        } else if (key == "kappa") {
            hp.kappa = as_number(value, field);
        } else if (key == "alpha") {
            hp.alpha = as_number(value, field);
        } else if (key == "rho1") {
            hp.rho1 = as_number(value, field);
        } else if (key == "rho2") {
            hp.rho2 = as_number(value, field);
        } else if (key == "rho3") {
            hp.rho3 = as_number(value, field);
        } else if (key == "max_iters") {
            hp.max_iters = as_int(value, field);
        } else if (key == "tol") {
            hp.tol = as_number(value, field);
        } else if (key == "group_weights") {
            hp.group_weights = parse_group_weights(as_string(value, field));
        } else if (key == "wavelet_order") {
            hp.wavelet_order = as_int(value, field);
        } else if (key == "wavelet_levels") {
            hp.wavelet_levels = as_int(value, field);
        } else if (key == "estimate_lag_noise") {
            hp.estimate_lag_noise = as_bool(value, field);
        } else {
            unknown(field);
        }
    }
}

void apply_gc(const json& sec, ToolConfig& cfg) {
    for (const auto& [key, value] : sec.items()) {
        const std::string field = "gc." + key;
        if (key == "method") {
            cfg.gc_method = as_string(value, field);
        } else if (key == "window") {
            cfg.gc_window = as_int(value, field);
        } else if (key == "stride") {
            cfg.gc_stride = as_int(value, field);
        } else if (key == "confidence") {
            cfg.gc_confidence = as_number(value, field);
        } else if (key == "blockwise_order") {
            cfg.gc_blockwise_order = as_int(value, field);
        } else {
            unknown(field);
        }
    }
}

void apply_sweep(const json& sec, ToolConfig& cfg) {
    for (const auto& [key, value] : sec.items()) {
        const std::string field = "sweep." + key;
        if (key == "points") {
            cfg.sweep_points = as_int(value, field);
        } else if (key == "seeds") {
            cfg.sweep_seeds = as_int(value, field);
        } else if (key == "noise_var_max") {
            cfg.sweep_noise_var_max = as_number(value, field);
        } else {
            unknown(field);
        }
    }
}

}  // namespace

void apply_config_file(const std::string& path, ToolConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: parse error in '" + path + "': " +
                          std::string(e.what()));
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, value] : root.items()) {
        if (!value.is_object()) fail(key, "must be an object section");
        if (key == "sim") {
            apply_sim(value, cfg.sim);
        } else if (key == "fit") {
            apply_fit(value, cfg);
        } else if (key == "gc") {
            apply_gc(value, cfg);
        } else if (key == "sweep") {
            apply_sweep(value, cfg);
        } else {
            unknown(key);
        }
    }
}

SimMode parse_sim_mode(const std::string& s) {
    if (s == "var") return SimMode::Var;
    if (s == "arfima") return SimMode::Arfima;
    fail("sim.mode", "must be 'var' or 'arfima' (got '" + s + "')");
}

std::string sim_mode_name(SimMode m) {
    return m == SimMode::Var ? "var" : "arfima";
}

GroupWeightMode parse_group_weights(const std::string& s) {
    if (s == "sqrt_size") return GroupWeightMode::SqrtSize;
    if (s == "uniform") return GroupWeightMode::Uniform;
    fail("fit.group_weights", "must be 'sqrt_size' or 'uniform' (got '" + s + "')");
}

std::string group_weights_name(GroupWeightMode m) {
    return m == GroupWeightMode::SqrtSize ? "sqrt_size" : "uniform";
}

GcMethod parse_gc_method(const std::string& s) {
    if (s == "direct") return GcMethod::Direct;
    if (s == "denoise") return GcMethod::Denoise;
    if (s == "blockwise") return GcMethod::Blockwise;
    fail("gc.method", "must be 'direct', 'denoise', or 'blockwise' (got '" + s + "')");
}

std::string gc_method_name(GcMethod m) {
    switch (m) {
        case GcMethod::Direct: return "direct";
        case GcMethod::Denoise: return "denoise";
        case GcMethod::Blockwise: return "blockwise";
    }
    return "direct";
}

void validate_tool_config(const ToolConfig& cfg) {
    if (cfg.fit_method != "ss" && cfg.fit_method != "ssd" && cfg.fit_method != "ols")
        throw ConfigError("config: field 'fit.method' must be 'ss', 'ssd', or 'ols' (got '" +
                          cfg.fit_method + "')");
    parse_gc_method(cfg.gc_method);  // throws on bad spelling
    if (cfg.m_bar < 1) throw ConfigError("config: field 'fit.m_bar' must be >= 1");
    if (!(cfg.gc_confidence > 0.0 && cfg.gc_confidence < 1.0))
        throw ConfigError("config: field 'gc.confidence' must lie in (0, 1)");
    if (cfg.gc_window < 0) throw ConfigError("config: field 'gc.window' must be >= 0");
    if (cfg.gc_stride < 0) throw ConfigError("config: field 'gc.stride' must be >= 0");
    if (cfg.gc_blockwise_order < 0)
        throw ConfigError("config: field 'gc.blockwise_order' must be >= 0");
    if (cfg.sweep_points < 1) throw ConfigError("config: field 'sweep.points' must be >= 1");
    if (cfg.sweep_seeds < 1) throw ConfigError("config: field 'sweep.seeds' must be >= 1");
    if (cfg.sweep_noise_var_max < 0.0)
        throw ConfigError("config: field 'sweep.noise_var_max' must be >= 0");
}

}  // namespace vargc::tool
