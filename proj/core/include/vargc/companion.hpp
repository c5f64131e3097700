#pragma once

#include <Eigen/Dense>

#include "vargc/types.hpp"

namespace vargc {

/// First-order (stacked) form of a lag-m_bar two-channel model.  The top
/// two rows carry the 2x2 lag blocks in lag order [B1 B2 ... Bm]; below
/// them sits a shifted identity:
///   [ B1   B2  ...  Bm ]
///   [ I    0   ...  0  ]
///   [ 0    I   ...  0  ]
/// Eigenvalues of this matrix are the characteristic roots of the model, so
/// the model is stationary iff they all lie strictly inside the unit circle.
struct CompanionMatrix {
    Eigen::MatrixXd M;  ///< 2*m_bar x 2*m_bar
    int m_bar = 0;
};

/// Build the companion form of a coefficient matrix.
CompanionMatrix embed(const VarCoefficients& coeffs);

/// Read coefficients back out of the top two rows of a 2m x 2m matrix.  The
/// input does not have to be a valid companion matrix; rows below the top
/// two are ignored.
VarCoefficients extract(const Eigen::MatrixXd& M, int m_bar);

/// Largest singular value of an arbitrary real matrix.
double spectral_norm(const Eigen::MatrixXd& M);

/// Largest eigenvalue magnitude of the companion form of `coeffs`.
double eigen_radius(const VarCoefficients& coeffs);

/// True iff every characteristic root has magnitude < 1 - eps.  Negative
/// eps expresses a tolerance band above 1.
bool is_stationary(const VarCoefficients& coeffs, double eps = 0.0);

}  // namespace vargc
