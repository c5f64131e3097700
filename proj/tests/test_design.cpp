#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "vargc/design.hpp"

using namespace vargc;

namespace {

BivariateSeries ramp_series() {
    Eigen::VectorXd y(6), x(6);
    y << 1, 2, 3, 4, 5, 6;
    x << 10, 20, 30, 40, 50, 60;
    return BivariateSeries(y, x);
}

BivariateSeries random_series(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd y(n), x(n);
    for (int t = 0; t < n; ++t) {
        y(t) = g(rng);
        x(t) = g(rng);
    }
    return BivariateSeries(y, x);
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("lag design columns hold the expected history (frozen)") {
    const LagDesign d = build_lag_design(ramp_series(), 2);
    CHECK(d.m_bar == 2);
    CHECK(d.T() == 4);
    CHECK(d.Y.rows() == 2);
    CHECK(d.H.rows() == 4);

    // First column targets sample index 2: y=3, x=30, history
    // [y(1), y(0), x(1), x(0)].
    Eigen::Vector2d y0(3, 30);
    Eigen::Vector4d h0(2, 1, 20, 10);
    CHECK((d.Y.col(0) - y0).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.H.col(0) - h0).cwiseAbs().maxCoeff() == 0.0);

    // Last column targets sample index 5.
    Eigen::Vector2d y3(6, 60);
    Eigen::Vector4d h3(5, 4, 50, 40);
    CHECK((d.Y.col(3) - y3).cwiseAbs().maxCoeff() == 0.0);
    CHECK((d.H.col(3) - h3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lag design requires enough samples") {
    CHECK_THROWS_AS(build_lag_design(ramp_series(), 3), InvalidInput);
    CHECK_NOTHROW(build_lag_design(ramp_series(), 2));
    CHECK_THROWS_AS(build_lag_design(ramp_series(), 0), InvalidInput);
}

TEST_CASE("restricted design blocks are slices of the coupled design") {
    const BivariateSeries s = random_series(40, 11u);
    const LagDesign full = build_lag_design(s, 5);
    const RestrictedDesign r = build_restricted_design(s, 5);
    CHECK(r.T() == full.T());
    CHECK((r.y - full.Y.row(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.x - full.Y.row(1)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.Hy - full.H.topRows(5)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((r.Hx - full.H.bottomRows(5)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("restricted gram and cross moments match the block-diagonal layout") {
    const BivariateSeries s = random_series(30, 7u);
    const RestrictedDesign r = build_restricted_design(s, 3);
    const Eigen::MatrixXd Yf = r.full_Y();
    const Eigen::MatrixXd Hf = r.full_H();
    CHECK(Yf.rows() == 2);
    CHECK(Yf.cols() == 2 * r.T());
    CHECK(Hf.rows() == 6);
    CHECK((r.HHt() - Hf * Hf.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.YHt() - Yf * Hf.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // Off-diagonal blocks of the conceptual design are exactly zero.
    CHECK(Hf.topRows(3).rightCols(r.T()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Hf.bottomRows(3).leftCols(r.T()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("channel rss agrees with a direct residual computation") {
    const BivariateSeries s = random_series(50, 3u);
    const LagDesign d = build_lag_design(s, 4);
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 8);
    const Eigen::MatrixXd resid = d.Y - A * d.H;
    const Eigen::Vector2d rss = channel_rss(d.Y, A, d.H);
    CHECK(rss(0) == doctest::Approx(resid.row(0).squaredNorm()).epsilon(1e-14));
    CHECK(rss(1) == doctest::Approx(resid.row(1).squaredNorm()).epsilon(1e-14));
}

TEST_CASE("restricted rss only sees the self-coupling positions") {
    const BivariateSeries s = random_series(30, 5u);
    const RestrictedDesign r = build_restricted_design(s, 3);
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(2, 6);
    const Eigen::Vector2d rss = r.rss(VarCoefficients(A, 3));

    const double rss_y = (r.y - A.row(0).head(3) * r.Hy).squaredNorm();
    const double rss_x = (r.x - A.row(1).tail(3) * r.Hx).squaredNorm();
    CHECK(rss(0) == doctest::Approx(rss_y).epsilon(1e-14));
    CHECK(rss(1) == doctest::Approx(rss_x).epsilon(1e-14));

    // Cross-coupling positions must not influence the result.
    Eigen::MatrixXd B = A;
    B.row(0).tail(3).setConstant(99.0);
    B.row(1).head(3).setConstant(-42.0);
    const Eigen::Vector2d rss2 = r.rss(VarCoefficients(B, 3));
    CHECK((rss - rss2).cwiseAbs().maxCoeff() == 0.0);
}

}  // TEST_SUITE
