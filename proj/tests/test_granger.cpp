#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "vargc/baselines.hpp"
#include "vargc/granger.hpp"
#include "vargc/simulate.hpp"

using namespace vargc;

namespace {

FitResult synthetic_fit(std::array<int, 4> orders, double rss_y, double rss_x) {
    FitResult f;
    f.coefficients = VarCoefficients::zero(
        std::max({orders[0], orders[1], orders[2], orders[3], 1}));
    f.orders = orders;
    f.rss << rss_y, rss_x;
    return f;
}

BivariateSeries coupled_series(std::uint64_t seed, Eigen::Index n) {
    SimConfig cfg;
    cfg.orders = {2, 3, 0, 2};  // x drives y; y never enters x
    cfg.n_samples = n;
    cfg.measurement_var = 0.0;
    cfg.seed = seed;
    return assemble_observation(cfg).observed;
}

}  // namespace

TEST_SUITE("granger") {

TEST_CASE("distribution functions match frozen reference values") {
    // Symmetry: equal degrees of freedom put the median at 1.
    for (const double d : {1.0, 5.0, 10.0})
        CHECK(f_cdf(1.0, d, d) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(f_cdf(2.5, 4, 30) == doctest::Approx(0.9365235602017492).epsilon(1e-10));
    CHECK(f_cdf(3.2, 7, 3) == doctest::Approx(0.8161223831763731).epsilon(1e-10));
    CHECK(f_cdf(0.0, 3, 9) == 0.0);
    CHECK(f_cdf(-2.0, 3, 9) == 0.0);

    CHECK(f_critical(0.95, 2, 10) ==
          doctest::Approx(4.1028210151304005).epsilon(1e-9));
    CHECK(f_critical(0.99, 3, 50) ==
          doctest::Approx(4.1993434460055).epsilon(1e-9));
    CHECK(f_critical(0.90, 5, 20) ==
          doctest::Approx(2.158227220168426).epsilon(1e-9));
    CHECK(f_critical(0.975, 12, 8) ==
          doctest::Approx(4.199667461316728).epsilon(1e-9));
    // Huge denominator df approaches the chi-square limit.  The continued
    // fraction loses a little accuracy out here, hence the looser bound.
    CHECK(f_critical(0.95, 1, 1e9) ==
          doctest::Approx(3.841458776956064).epsilon(1e-6));
    for (const double d : {1.0, 4.0, 9.0})
        CHECK(f_critical(0.5, d, d) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(f_cdf(1.0, 0.0, 5.0), InvalidInput);
    CHECK_THROWS_AS(f_critical(1.0, 2, 2), InvalidInput);
    CHECK_THROWS_AS(f_critical(0.95, 2, -1), InvalidInput);
}

TEST_CASE("quantile and CDF invert each other") {
    for (const double p : {0.05, 0.5, 0.9, 0.95, 0.99}) {
        for (const double d1 : {1.0, 3.0, 17.0}) {
            for (const double d2 : {2.0, 30.0, 500.0}) {
                const double x = f_critical(p, d1, d2);
                CHECK(f_cdf(x, d1, d2) == doctest::Approx(p).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("quantile agrees with direct density quadrature") {
    const double c = f_critical(0.95, 6, 40);
    const double mass =
        oracles::simpson([](double t) { return f_pdf(t, 6, 40); }, 0.0, c, 20000);
    CHECK(mass == doctest::Approx(0.95).epsilon(1e-7));
}

TEST_CASE("variance-ratio statistic (frozen hand value)") {
    // (12 - 10) / 3 = 2/3 extra per predictor; 10 / 94 noise per df.
    CHECK(gc_statistic(12.0, 10.0, 6, 3, 100) ==
          doctest::Approx(94.0 / 15.0).epsilon(1e-14));
    CHECK_THROWS_AS(gc_statistic(12.0, 10.0, 3, 3, 100), InvalidInput);
    CHECK_THROWS_AS(gc_statistic(12.0, 10.0, 6, 3, 6), InvalidInput);
    CHECK_THROWS_AS(gc_statistic(12.0, 0.0, 6, 3, 100), InvalidInput);
}

TEST_CASE("predictor counting per channel") {
    const std::array<int, 4> orders{3, 5, 2, 7};
    CHECK(predictor_count(orders, 0) == 8);
    CHECK(predictor_count(orders, 1) == 9);
    CHECK_THROWS_AS(predictor_count(orders, 2), InvalidInput);
}

TEST_CASE("report assembly wires both directions") {
    const FitResult full = synthetic_fit({3, 2, 1, 3}, 10.0, 20.0);
    const FitResult reduced = synthetic_fit({3, 0, 0, 3}, 12.0, 21.0);
    const GcReport rep = make_gc_report(full, reduced, 100, 0.95);
    CHECK(rep.t_eff == 100);
    CHECK(rep.x_to_y.params_full == 5);
    CHECK(rep.x_to_y.params_reduced == 3);
    CHECK(rep.x_to_y.df_num == 2);
    CHECK(rep.x_to_y.df_den == 95);
    CHECK(rep.x_to_y.valid);
    CHECK(rep.x_to_y.f_stat ==
          doctest::Approx(gc_statistic(12, 10, 5, 3, 100)).epsilon(1e-14));
    CHECK(rep.y_to_x.params_full == 4);
    CHECK(rep.y_to_x.df_num == 1);
    CHECK(rep.y_to_x.valid);
    CHECK(rep.y_to_x.p_value ==
          doctest::Approx(1.0 - f_cdf(rep.y_to_x.f_stat, 1, 96)).epsilon(1e-12));
    CHECK_THROWS_AS(make_gc_report(full, reduced, 100, 1.5), InvalidInput);
}

TEST_CASE("anomalous inputs are reported but never significant") {
    // Full model fits worse than the reduced one: raw negative statistic.
    const FitResult full = synthetic_fit({3, 2, 1, 3}, 10.0, 20.0);
    const FitResult worse = synthetic_fit({3, 0, 0, 3}, 8.0, 30.0);
    const GcReport rep = make_gc_report(full, worse, 100, 0.95);
    CHECK_FALSE(rep.x_to_y.valid);
    CHECK(rep.x_to_y.f_stat < 0.0);
    CHECK_FALSE(rep.x_to_y.significant);
    CHECK(rep.y_to_x.valid);

    // No extra predictors in the full model.
    const FitResult flat = synthetic_fit({3, 0, 1, 3}, 10.0, 20.0);
    const FitResult reduced = synthetic_fit({3, 0, 0, 3}, 12.0, 21.0);
    const GcReport rep2 = make_gc_report(flat, reduced, 100, 0.95);
    CHECK_FALSE(rep2.x_to_y.valid);
    CHECK(rep2.x_to_y.df_num == 0);
    CHECK(std::isnan(rep2.x_to_y.f_stat));
    CHECK_FALSE(rep2.x_to_y.significant);
}

TEST_CASE("with penalties off the pipeline statistic equals least squares") {
    const BivariateSeries s = coupled_series(21, 400);
    const int m_bar = 4;
    HyperParams hp;
    hp.lambda = 0.0;
    hp.gamma = 0.0;
    hp.tol = 1e-10;
    hp.max_iters = 20000;
    const GcReport direct = gc_test(s, GcMethod::Direct, m_bar, hp);
    const GcReport block = gc_test(s, GcMethod::Blockwise, m_bar, hp, 0.95, m_bar);
    CHECK(direct.orders_full == std::array<int, 4>{m_bar, m_bar, m_bar, m_bar});
    CHECK(direct.x_to_y.f_stat ==
          doctest::Approx(block.x_to_y.f_stat).epsilon(1e-6));
    CHECK(direct.y_to_x.f_stat ==
          doctest::Approx(block.y_to_x.f_stat).epsilon(1e-6));
}

TEST_CASE("a one-directional link is detected by the classical baseline") {
    const BivariateSeries s = coupled_series(101, 800);
    const GcReport rep = gc_test(s, GcMethod::Blockwise, 4, HyperParams{}, 0.95, 3);
    CHECK(rep.x_to_y.valid);
    CHECK(rep.x_to_y.significant);
    CHECK_FALSE(rep.y_to_x.significant);
}

TEST_CASE("sliding windows honor stride and parallelism is transparent") {
    const BivariateSeries s = coupled_series(23, 300);
    HyperParams hp;
    const GcTrace serial =
        gc_trace(s, GcMethod::Blockwise, 120, 60, 4, hp, 0.95, 1, 2);
    CHECK(serial.starts.size() == 4);  // 0, 60, 120, 180
    CHECK(serial.starts[3] == 180);
    const GcTrace parallel =
        gc_trace(s, GcMethod::Blockwise, 120, 60, 4, hp, 0.95, 3, 2);
    REQUIRE(parallel.reports.size() == serial.reports.size());
    for (std::size_t i = 0; i < serial.reports.size(); ++i) {
        CHECK(parallel.reports[i].x_to_y.f_stat ==
              serial.reports[i].x_to_y.f_stat);
        CHECK(parallel.reports[i].y_to_x.f_stat ==
              serial.reports[i].y_to_x.f_stat);
    }
    CHECK_THROWS_AS(gc_trace(s, GcMethod::Blockwise, 301, 60, 4, hp),
                    InvalidInput);
    CHECK_THROWS_AS(gc_trace(s, GcMethod::Blockwise, 120, 0, 4, hp),
                    InvalidInput);
}

}  // TEST_SUITE
