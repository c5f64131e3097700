#pragma once

#include <Eigen/Dense>

#include "vargc/types.hpp"

namespace vargc {

/// Regression layout for the coupled two-channel model Y ~ A * H.
///   Y (2 x T)       column t holds [y(t); x(t)]
///   H (2m_bar x T)  column t holds [y(t-1)..y(t-m_bar), x(t-1)..x(t-m_bar)]
/// with T = n_samples - m_bar usable columns.
struct LagDesign {
    Eigen::MatrixXd Y;  ///< 2 x T
    Eigen::MatrixXd H;  ///< 2*m_bar x T
    int m_bar = 0;

    Eigen::Index T() const { return Y.cols(); }
};

/// Regression layout for the channel-decoupled (restricted) model.  The
/// conceptual matrices are block-diagonal,
///   Y_r = [ y 0 ; 0 x ]   (2 x 2T),   H_r = [ Hy 0 ; 0 Hx ]  (2m_bar x 2T),
/// so cross-channel coefficient positions only ever multiply zero columns of
/// the block they are scored against.  Only the nonzero blocks are stored;
/// `full_Y` / `full_H` materialize the conceptual matrices for checks.
struct RestrictedDesign {
    Eigen::RowVectorXd y;  ///< 1 x T target for channel y
    Eigen::RowVectorXd x;  ///< 1 x T target for channel x
    Eigen::MatrixXd Hy;    ///< m_bar x T   y-lag block
    Eigen::MatrixXd Hx;    ///< m_bar x T   x-lag block
    int m_bar = 0;

    Eigen::Index T() const { return y.size(); }

    Eigen::MatrixXd full_Y() const;   ///< 2 x 2T block-diagonal target
    Eigen::MatrixXd full_H() const;   ///< 2m_bar x 2T block-diagonal design
    Eigen::MatrixXd HHt() const;      ///< block-diagonal Gram matrix, 2m x 2m
    Eigen::MatrixXd YHt() const;      ///< 2 x 2m cross-moment matrix

    /// Residual sums of squares of the two channel fits, using only the
    /// self-coupling positions of A (row 0 head, row 1 tail).
    Eigen::Vector2d rss(const VarCoefficients& coeffs) const;
};

/// Build the coupled design from a series.  Requires
/// n_samples >= 2*m_bar + 2 so at least m_bar + 2 columns exist.
LagDesign build_lag_design(const BivariateSeries& series, int m_bar);

/// Build the channel-decoupled design over the same window (T columns).
RestrictedDesign build_restricted_design(const BivariateSeries& series, int m_bar);

/// Per-channel residual sums of squares of Y - A*H.
Eigen::Vector2d channel_rss(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& H);

}  // namespace vargc
