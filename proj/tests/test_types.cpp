#include <Eigen/Dense>

#include "doctest.h"
#include "vargc/types.hpp"

using namespace vargc;

TEST_SUITE("types") {

TEST_CASE("series validation rejects malformed input") {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(5);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(BivariateSeries(a, b), InvalidInput);
    CHECK_THROWS_AS(BivariateSeries(a.head(1), a.head(1)), InvalidInput);
    Eigen::VectorXd nan = a;
    nan(2) = std::nan("");
    CHECK_THROWS_AS(BivariateSeries(a, nan), InvalidInput);
    CHECK_THROWS_AS(BivariateSeries(a, a, -1.0), InvalidInput);
    CHECK_NOTHROW(BivariateSeries(a, a, 250.0));
}

TEST_CASE("window slices both channels") {
    Eigen::VectorXd y(6), x(6);
    y << 0, 1, 2, 3, 4, 5;
    x << 10, 11, 12, 13, 14, 15;
    const BivariateSeries s(y, x, 1000.0);
    const BivariateSeries w = s.window(2, 3);
    CHECK(w.n_samples() == 3);
    CHECK(w.y(0) == 2.0);
    CHECK(w.y(2) == 4.0);
    CHECK(w.x(0) == 12.0);
    CHECK(*w.sample_rate == 1000.0);
    CHECK_THROWS_AS(s.window(5, 3), InvalidInput);
    CHECK_THROWS_AS(s.window(-1, 3), InvalidInput);
    CHECK_THROWS_AS(s.window(0, 1), InvalidInput);
}

TEST_CASE("coefficient layout: row blocks and lag blocks agree") {
    // m_bar = 2, entries chosen so every position is distinct.
    Eigen::MatrixXd A(2, 4);
    A << 1, 2, 3, 4,
         5, 6, 7, 8;
    const VarCoefficients c(A, 2);
    CHECK(c.a_yy()(0) == 1.0);
    CHECK(c.a_yy()(1) == 2.0);
    CHECK(c.a_yx()(0) == 3.0);
    CHECK(c.a_xy()(1) == 6.0);
    CHECK(c.a_xx()(1) == 8.0);

    Eigen::Matrix2d B1, B2;
    B1 << 1, 3, 5, 7;  // lag-1 weights: [yy yx; xy xx]
    B2 << 2, 4, 6, 8;
    CHECK((c.lag_block(1) - B1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((c.lag_block(2) - B2).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(c.lag_block(0), InvalidInput);
    CHECK_THROWS_AS(c.lag_block(3), InvalidInput);
}

TEST_CASE("to_vec stacks rows and from_vec inverts it") {
    Eigen::MatrixXd A(2, 4);
    A << 1, 2, 3, 4,
         5, 6, 7, 8;
    const VarCoefficients c(A, 2);
    const Eigen::VectorXd v = c.to_vec();
    Eigen::VectorXd expect(8);
    expect << 1, 2, 3, 4, 5, 6, 7, 8;
    CHECK((v - expect).cwiseAbs().maxCoeff() == 0.0);
    const VarCoefficients back = VarCoefficients::from_vec(v, 2);
    CHECK((back.A - A).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(VarCoefficients::from_vec(v, 3), InvalidInput);
}

TEST_CASE("hyper parameter validation and primed fallbacks") {
    HyperParams hp;
    CHECK_NOTHROW(hp.validate());
    CHECK(hp.lambda_restricted() == hp.lambda);
    CHECK(hp.gamma_restricted() == hp.gamma);
    hp.lambda_prime = 0.25;
    hp.gamma_prime = 2.0;
    CHECK(hp.lambda_restricted() == 0.25);
    CHECK(hp.gamma_restricted() == 2.0);

    HyperParams bad = hp;
    bad.rho2 = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = hp;
    bad.lambda = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = hp;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = hp;
    bad.wavelet_order = 11;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = hp;
    bad.tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("nmse is a normalized squared error") {
    Eigen::MatrixXd truth(2, 2), est(2, 2);
    truth << 3, 0, 0, 4;  // Frobenius norm 5
    est = truth;
    CHECK(nmse(est, truth) == 0.0);
    est(0, 0) = 4;  // squared error 1, truth squared norm 25
    CHECK(nmse(est, truth) == doctest::Approx(1.0 / 25.0).epsilon(1e-14));
    CHECK_THROWS_AS(nmse(est, Eigen::MatrixXd::Zero(2, 2)), InvalidInput);
    CHECK_THROWS_AS(nmse(est, Eigen::MatrixXd::Zero(3, 2)), InvalidInput);
}

}  // TEST_SUITE
