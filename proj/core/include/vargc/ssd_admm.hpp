#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "vargc/design.hpp"
#include "vargc/ss_admm.hpp"
#include "vargc/types.hpp"

namespace vargc {

/// Joint fit/denoise outcome.  The observed design (Y_hat, H_hat) is split
/// into a model-consistent part and additive noise:
///   Y_hat = A * H_clean + E + dY,     H_clean = H_hat - dH,
/// where E is the wavelet-sparse excitation driving the model and dY / dH
/// are the measurement-noise estimates on the target and lag sides.  The
/// identity above holds exactly at every iteration; identity_error_max
/// records the largest deviation ever observed (should be ~0).
struct DenoiseResult {
    VarCoefficients coefficients;
    std::array<int, 4> orders{0, 0, 0, 0};
    Eigen::MatrixXd E;        ///< 2 x T sparse excitation
    Eigen::MatrixXd dY;       ///< 2 x T target-side noise estimate
    Eigen::MatrixXd dH;       ///< 2m x T lag-side noise estimate
    Eigen::MatrixXd H_clean;  ///< 2m x T denoised lag matrix
    Eigen::MatrixXd Y_clean;  ///< 2 x T denoised targets (Y_hat - dY)
    Eigen::Vector2d rss = Eigen::Vector2d::Zero();  ///< on the denoised data
    int iterations = 0;
    bool converged = false;
    bool oscillation_stop = false;  ///< stopped by the oscillation guard
    bool ridge_fallback = false;    ///< a lag-noise solve needed regularizing
    double identity_error_max = 0.0;
    std::vector<double> residual_history;
    std::vector<double> objective_history;
};

/// Noise-aware coefficient update: like the plain solver's update but with
/// the data term weighted by alpha, the current excitation removed from the
/// targets, and the current denoised lag matrix in place of the observed one:
///   A = [rho3 (Z - U3) + rho1 unflatten(c - u1) + alpha (Y_hat - E) H^T]
///       [alpha H H^T + (rho1 + rho3) I]^{-1}.
Eigen::MatrixXd update_A_noisy(const LagDesign& noisy, const Eigen::MatrixXd& H,
                               const Eigen::MatrixXd& E, const AdmmState& state,
                               const LogState& log, const HyperParams& params);

/// Excitation update: rowwise wavelet shrinkage of the fit residual R with
/// threshold kappa / alpha.
Eigen::MatrixXd update_E(const Eigen::MatrixXd& R, const HyperParams& params);

/// Minimum-norm solve for the noise on the oldest lag column.  Only the
/// first design column touches samples that never appear as targets, so
/// their noise dh must satisfy the 2-equation system
///   A dh = A h - y0 + e0 + dy0
/// with h the observed first lag column; the solution A^T (A A^T)^{-1} rhs
/// is the minimum-norm one.  A near-singular A A^T gets a small ridge
/// (1e-8 * trace) and sets *ridge_fallback.
Eigen::VectorXd solve_dh_first_column(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& h,
                                      const Eigen::Vector2d& y0,
                                      const Eigen::Vector2d& e0,
                                      const Eigen::Vector2d& dy0,
                                      bool* ridge_fallback = nullptr);

/// Rebuild the full lag-noise matrix (2m x T) from its generators.  Each
/// channel block of a lag matrix is constant along diagonals (entry (i, j)
/// repeats at (i+1, j+1)), so the block is determined by its first column
/// (from `first_col`, length 2*m_bar, lag-reversed) and its first row past
/// column 0 (`row_y` / `row_x`, length T-1: the target-side noise of all but
/// the last design column).
Eigen::MatrixXd toeplitz_complete(const Eigen::VectorXd& first_col,
                                  const Eigen::RowVectorXd& row_y,
                                  const Eigen::RowVectorXd& row_x, int m_bar);

/// Joint order selection, stability and denoising fit on a noisy design.
/// Alternates the coefficient/latent/stability updates with excitation
/// shrinkage and lag-noise completion.  The first iterations run with the
/// noise estimates pinned at zero (up to 200, ending early once the
/// coefficient residual is below tol): shrinking the residual of a cold
/// coefficient start would classify unexplained signal as noise and corrupt
/// the lag matrix irrecoverably.  Stops when both the solver residual and
/// the relative change of the denoised lag matrix fall below tol, or when
/// the objective has alternated direction for more than 50 consecutive
/// iterations (oscillation guard; the best iterate seen is returned).
DenoiseResult fit_denoise(const LagDesign& noisy, const HyperParams& params);

/// Stitch the denoised design back into a series of the original length:
/// the first m_bar samples come from the (lag-reversed) first clean lag
/// column, the remaining T from the clean targets.
BivariateSeries denoised_series(const DenoiseResult& result);

}  // namespace vargc
