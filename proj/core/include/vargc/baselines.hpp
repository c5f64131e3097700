#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vargc/design.hpp"
#include "vargc/granger.hpp"
#include "vargc/types.hpp"

namespace vargc {

/// Plain least-squares fit of the coupled model at the design's full lag
/// depth (no order selection, no stability control).  A numerically rank
/// deficient Gram matrix gets a tiny ridge and sets ridge_fallback.
FitResult ols_fit(const LagDesign& design);

/// Least-squares fit of the channel-decoupled model; cross-coupling blocks
/// are identically zero and orders are reported as (m, 0, 0, m).
FitResult ols_fit_restricted(const RestrictedDesign& design);

/// Order scan by the Gaussian information criterion
///   score(m) = T log det(Sigma_hat(m)) + 4 m log T
/// over candidate lag depths 1..max_order, each fit by least squares on its
/// own design.  Candidates whose residual covariance is singular are skipped
/// (NaN score, skipped_any set); ties resolve to the smallest order.
struct BicScan {
    int selected = 0;
    std::vector<int> orders;
    std::vector<double> scores;  ///< NaN where the candidate was skipped
    bool skipped_any = false;
};

BicScan bic_order(const BivariateSeries& series, int max_order);

/// Classical directional-influence test: least-squares fits at one fixed
/// lag depth for every block (order 0 means "select by bic_order over
/// 1..max_order"), so the full model has 2*order predictors per channel and
/// the reduced one `order`.
GcReport blockwise_gc(const BivariateSeries& series, int order,
                      double confidence = 0.95, int max_order = 20);

/// Exact 1-D total-variation denoising
///   min_x 0.5 ||x - signal||^2 + weight * sum_i |x_{i+1} - x_i|
/// by the direct non-iterative taut-string sweep.
Eigen::VectorXd tv_denoise(const Eigen::VectorXd& signal, double weight);

/// Channel-wise total-variation denoising of a series.
BivariateSeries tv_denoise(const BivariateSeries& series, double weight);

/// Data-driven weight for tv_denoise: a robust noise-level estimate from
/// the median absolute deviation of first differences, scaled by the
/// universal threshold sqrt(2 log n).
double suggest_tv_weight(const Eigen::VectorXd& signal);

/// Pick a denoising weight for the TV-then-fit pipeline by holdout
/// validation: candidates {0, 1/4, 1/2, 1, 2} x the suggest_tv_weight
/// average are scored by how well a least-squares model of depth m_bar,
/// fit on the denoised head of the series, predicts the raw tail.  Smooth
/// too little and noisy regressors hurt; smooth too much and the dynamics
/// are erased.  Ties resolve to the smaller weight.
double tv_weight_by_validation(const BivariateSeries& series, int m_bar,
                               double holdout_fraction = 0.2);

}  // namespace vargc
