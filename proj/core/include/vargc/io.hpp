#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "vargc/types.hpp"

namespace vargc {

/// Read a two-column numeric CSV (comma separated, optional single header
/// line, blank lines ignored).  Column 0 becomes y, column 1 becomes x.
/// Malformed rows raise InvalidInput with the offending line number.
BivariateSeries read_series_csv(const std::filesystem::path& path);

/// Write a series as a two-column CSV with header "y,x".  Values are
/// printed with enough digits to round-trip exactly.
void write_series_csv(const std::filesystem::path& path,
                      const BivariateSeries& series);

/// Write a matrix as a headerless CSV, one row per line, round-trip digits.
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& mat);

/// 64-bit FNV-1a hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// FNV-1a hash of a file's raw bytes.
std::uint64_t digest_file(const std::filesystem::path& path);

/// Fixed-width lowercase hex rendering of a 64-bit value.
std::string to_hex(std::uint64_t value);

}  // namespace vargc
