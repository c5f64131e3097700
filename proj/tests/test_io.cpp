#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "vargc/io.hpp"

using namespace vargc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vargc_io_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("series round-trips bitwise through CSV") {
    TempDir tmp;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    BivariateSeries s;
    s.y.resize(64);
    s.x.resize(64);
    for (Eigen::Index i = 0; i < 64; ++i) {
        s.y[i] = gauss(rng) * std::pow(10.0, int(i % 13) - 6);
        s.x[i] = gauss(rng);
    }
    s.y[0] = 0.1;  // not exactly representable: digits matter
    s.y[1] = -0.0;
    s.y[2] = 1e-300;
    const fs::path file = tmp.path / "series.csv";
    write_series_csv(file, s);
    const BivariateSeries back = read_series_csv(file);
    REQUIRE(back.y.size() == 64);
    for (Eigen::Index i = 0; i < 64; ++i) {
        CHECK(back.y[i] == s.y[i]);
        CHECK(back.x[i] == s.x[i]);
    }
}

TEST_CASE("reader tolerates a header and blank lines") {
    TempDir tmp;
    const fs::path file = tmp.path / "h.csv";
    write_text(file, "y,x\n1.5,2.5\n\n-3,4e2\n");
    const BivariateSeries s = read_series_csv(file);
    REQUIRE(s.y.size() == 2);
    CHECK(s.y[0] == 1.5);
    CHECK(s.x[0] == 2.5);
    CHECK(s.y[1] == -3.0);
    CHECK(s.x[1] == 400.0);
}

TEST_CASE("reader accepts headerless numeric files") {
    TempDir tmp;
    const fs::path file = tmp.path / "nh.csv";
    write_text(file, "1,2\n3,4\n");
    const BivariateSeries s = read_series_csv(file);
    REQUIRE(s.y.size() == 2);
    CHECK(s.y[0] == 1.0);
    CHECK(s.x[1] == 4.0);
}

TEST_CASE("malformed rows are rejected with their line number") {
    TempDir tmp;
    const fs::path file = tmp.path / "bad.csv";
    write_text(file, "y,x\n1,2\noops,3\n");
    try {
        read_series_csv(file);
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }

    write_text(file, "1,2,3\n");
    CHECK_THROWS_AS(read_series_csv(file), InvalidInput);
    write_text(file, "1\n");
    CHECK_THROWS_AS(read_series_csv(file), InvalidInput);
    write_text(file, "");
    CHECK_THROWS_AS(read_series_csv(file), InvalidInput);
    CHECK_THROWS_AS(read_series_csv(tmp.path / "missing.csv"), InvalidInput);
}

TEST_CASE("matrix writer emits plain rows") {
    TempDir tmp;
    Eigen::MatrixXd m(2, 3);
    m << 1, 2.5, -3, 0.125, 5, 6;
    const fs::path file = tmp.path / "m.csv";
    write_matrix_csv(file, m);
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    CHECK(line == "1,2.5,-3");
    std::getline(in, line);
    CHECK(line == "0.125,5,6");
}

TEST_CASE("hash (frozen reference values)") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("hex rendering is fixed width lowercase") {
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xdeadbeefULL) == "00000000deadbeef");
    CHECK(to_hex(0xcbf29ce484222325ULL) == "cbf29ce484222325");
}

TEST_CASE("file digest equals the hash of the raw bytes") {
    TempDir tmp;
    const fs::path file = tmp.path / "bytes.bin";
    const std::string payload = "line1\nline2\n\x01\x02";
    write_text(file, payload);
    CHECK(digest_file(file) == fnv1a64(payload));
    CHECK_THROWS_AS(digest_file(tmp.path / "absent"), InvalidInput);
}

}  // TEST_SUITE
