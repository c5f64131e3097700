#pragma once

#include <Eigen/Dense>
#include <array>
#include <limits>
#include <vector>

#include "vargc/types.hpp"

namespace vargc {

/// How a directional-influence report is produced.
///   Direct    fit full and channel-decoupled models on the data as given
///   Denoise   denoise first, then run the Direct procedure on the cleaned
///             series
///   Blockwise classical fixed-order least-squares comparison (baseline)
enum class GcMethod { Direct, Denoise, Blockwise };

/// Lower-tail CDF of the F distribution with d1, d2 degrees of freedom,
/// computed through the regularized incomplete beta function.
double f_cdf(double f, double d1, double d2);

/// Quantile of the F distribution: the x with f_cdf(x, d1, d2) = p, found by
/// bracketing + bisection and polished with Newton steps.  p must lie in
/// (0, 1).
double f_critical(double p, double d1, double d2);

/// Density of the F distribution (used for the quantile Newton polish).
double f_pdf(double f, double d1, double d2);

/// Variance-ratio statistic comparing a reduced model (fewer predictors)
/// against a full one on the same channel:
///   F = [(rss_reduced - rss_full) / (p_full - p_reduced)]
///       / [rss_full / (t_eff - p_full)].
/// Throws unless p_full > p_reduced, t_eff > p_full and rss_full > 0.
double gc_statistic(double rss_reduced, double rss_full, int p_full,
                    int p_reduced, Eigen::Index t_eff);

/// Number of coefficients predicting one channel implied by per-block
/// estimated orders (channel 0: yy + yx, channel 1: xy + xx).
int predictor_count(const std::array<int, 4>& orders, int channel);

/// One direction of the influence test.  When the estimated orders or
/// residuals are anomalous (no extra predictors in the full model, or the
/// full model fitting worse than the reduced one) the raw numbers are still
/// reported but `valid` is false and `significant` is never set.
struct DirectionalTest {
    double f_stat = std::numeric_limits<double>::quiet_NaN();
    double f_critical = std::numeric_limits<double>::quiet_NaN();
    double p_value = std::numeric_limits<double>::quiet_NaN();
    int df_num = 0;
    Eigen::Index df_den = 0;
    int params_full = 0;
    int params_reduced = 0;
    double rss_full = std::numeric_limits<double>::quiet_NaN();
    double rss_reduced = std::numeric_limits<double>::quiet_NaN();
    bool significant = false;
    bool valid = false;
};

/// Both directions of the influence test plus the orders they came from.
struct GcReport {
    DirectionalTest x_to_y;  ///< does x help predict y?
    DirectionalTest y_to_x;  ///< does y help predict x?
    std::array<int, 4> orders_full{0, 0, 0, 0};
    std::array<int, 4> orders_reduced{0, 0, 0, 0};
    Eigen::Index t_eff = 0;
    double confidence = 0.95;
};

/// Assemble the two directional tests from a full and a reduced fit over
/// the same t_eff regression columns.
GcReport make_gc_report(const FitResult& full, const FitResult& reduced,
                        Eigen::Index t_eff, double confidence = 0.95);

/// Run the full influence-test pipeline for one series.  blockwise_order
/// only matters for GcMethod::Blockwise (0 = select by information
/// criterion).
GcReport gc_test(const BivariateSeries& series, GcMethod method, int m_bar,
                 const HyperParams& params, double confidence = 0.95,
                 int blockwise_order = 0);

/// Influence tests over sliding windows [s, s + window) with the given
/// stride.
struct GcTrace {
    std::vector<Eigen::Index> starts;
    std::vector<GcReport> reports;
};

/// Evaluate gc_test on every window.  n_threads <= 0 uses the hardware
/// thread count; windows are distributed round-robin and results keep
/// window order.
GcTrace gc_trace(const BivariateSeries& series, GcMethod method,
                 Eigen::Index window, Eigen::Index stride, int m_bar,
                 const HyperParams& params, double confidence = 0.95,
                 int n_threads = 1, int blockwise_order = 0);

}  // namespace vargc
