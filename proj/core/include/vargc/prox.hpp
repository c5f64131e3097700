#pragma once

#include <Eigen/Dense>

#include "vargc/types.hpp"

namespace vargc {

/// Scalar shrinkage: sign(v) * max(|v| - t, 0).
double soft_threshold(double v, double t);

/// Element-wise shrinkage of a vector.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t);

/// Euclidean projection onto the l1 ball of the given radius (radius > 0).
/// Uses the exact sort-and-clip rule; already-feasible inputs are returned
/// unchanged.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

/// Proximal operator of t * max_i |v_i|, computed through the Moreau
/// identity prox(v) = v - t * project_l1_ball(v / t, 1).
Eigen::VectorXd prox_linf(const Eigen::VectorXd& v, double t);

/// Proximal operator of t * ||v||_2 (block shrinkage): scales v toward zero
/// and returns exact zero once ||v||_2 <= t.
Eigen::VectorXd group_prox(const Eigen::VectorXd& v, double t);

/// Full singular value decomposition X = U * diag(sigma) * V^T.
struct SingularSpectrum {
    Eigen::MatrixXd U;
    Eigen::VectorXd sigma;  ///< descending, non-negative
    Eigen::MatrixXd V;
};

SingularSpectrum singular_spectrum(const Eigen::MatrixXd& X);

/// Spectral-norm proximal step used by the stability update: shrink the
/// singular values of the 2m x 2m argument with prox_linf, rebuild, and
/// read the top block-row back as coefficients.  With t = 0 this reduces to
/// extract(X).
VarCoefficients prox_spectral(const Eigen::MatrixXd& X, double t);

}  // namespace vargc
