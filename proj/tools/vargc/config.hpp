#pragma once

#include <stdexcept>
#include <string>

#include "vargc/granger.hpp"
#include "vargc/simulate.hpp"
#include "vargc/types.hpp"

namespace vargc::tool {

/// Raised on malformed or out-of-range configuration; the CLI maps it to
/// exit code 2 and prints the offending field name.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Full tool configuration: generator settings, solver hyperparameters,
/// causality-analysis options, and sweep layout.  Every field can be set
/// from a JSON config file and overridden by a command-line flag.
struct ToolConfig {
    SimConfig sim;
    HyperParams fit;
    std::string fit_method = "ss";  ///< ss | ssd | ols
    int m_bar = 30;                 ///< maximum lag order per block

    std::string gc_method = "direct";  ///< direct | denoise | blockwise
    int gc_window = 0;                 ///< 0 = whole series
    int gc_stride = 0;                 ///< 0 = window length
    double gc_confidence = 0.95;
    int gc_blockwise_order = 0;  ///< 0 = information-criterion selection

    int sweep_points = 15;
    int sweep_seeds = 5;
    double sweep_noise_var_max = 1.41;
};

/// Parses a JSON config file into `cfg`, overwriting only the fields the
/// file mentions.  Unknown sections or keys raise ConfigError naming the
/// field ("config: unknown field 'sim.foo'"), as do type mismatches and
/// unsupported enum spellings.
void apply_config_file(const std::string& path, ToolConfig& cfg);

/// String <-> enum helpers shared by config parsing and output writing.
SimMode parse_sim_mode(const std::string& s);
std::string sim_mode_name(SimMode m);
GroupWeightMode parse_group_weights(const std::string& s);
std::string group_weights_name(GroupWeightMode m);
GcMethod parse_gc_method(const std::string& s);
std::string gc_method_name(GcMethod m);

/// Validates cross-field constraints that the core library would reject
/// later with less helpful messages (fit method spelling, window bounds,
/// confidence range).  Throws ConfigError.
void validate_tool_config(const ToolConfig& cfg);

}  // namespace vargc::tool
