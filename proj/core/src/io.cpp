#include "vargc/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace vargc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const int len = std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

}  // namespace

BivariateSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::vector<double> ys, xs;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view sv = trim(line);
        if (sv.empty()) continue;
        const std::size_t comma = sv.find(',');
        double y = 0.0, x = 0.0;
        const bool ok = comma != std::string_view::npos &&
                        sv.find(',', comma + 1) == std::string_view::npos &&
                        parse_double(sv.substr(0, comma), y) &&
                        parse_double(sv.substr(comma + 1), x);
        if (!ok) {
            if (!seen_data && line_no == 1) continue;  // header line
            throw InvalidInput(path.string() + ":" + std::to_string(line_no) +
                               ": expected two comma-separated numbers");
        }
        seen_data = true;
        ys.push_back(y);
        xs.push_back(x);
    }
    if (ys.size() < 2)
        throw InvalidInput(path.string() + ": needs at least 2 data rows");
    return BivariateSeries(
        Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())),
        Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size())));
}

void write_series_csv(const std::filesystem::path& path,
                      const BivariateSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << "y,x\n";
    for (Eigen::Index t = 0; t < series.n_samples(); ++t)
        out << format_double(series.y(t)) << ',' << format_double(series.x(t))
            << '\n';
    if (!out) throw NumericError("short write to " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& mat) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index j = 0; j < mat.cols(); ++j) {
            if (j) out << ',';
            out << format_double(mat(i, j));
        }
        out << '\n';
    }
    if (!out) throw NumericError("short write to " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t digest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

std::string to_hex(std::uint64_t value) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx",
                  static_cast<unsigned long long>(value));
    return std::string(buf.data(), 16);
}

}  // namespace vargc
