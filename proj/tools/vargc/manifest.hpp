#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "jwriter.hpp"

namespace vargc::tool {

/// Provenance record written next to every command's outputs: what ran,
/// with which effective configuration and seed, on which inputs (content
/// digests), producing which outputs (content digests), and how long each
/// stage took.  Two runs reproduce each other exactly when everything
/// here except the timings matches.
struct RunManifest {
    std::string command;
    ToolConfig config;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> inputs;   ///< path, digest
    std::vector<std::pair<std::string, std::string>> outputs;  ///< path, digest
    std::vector<std::pair<std::string, double>> timings_ms;

    /// Records `path` with its current on-disk content digest.
    void add_input(const std::string& path);
    void add_output(const std::string& path);
};

/// Simple wall-clock stopwatch feeding RunManifest::timings_ms.
class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

/// Full effective configuration as an ordered JSON tree (every field of
/// every section, not just the ones the user set).
JsonValue config_json(const ToolConfig& cfg);

/// Manifest as JSON, including the library version string.
JsonValue manifest_json(const RunManifest& m);

/// Writes text to `path`, throwing InvalidInput when the file cannot be
/// created.
void write_text_file(const std::string& path, const std::string& content);

/// Writes the manifest JSON to `path`.
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace vargc::tool
