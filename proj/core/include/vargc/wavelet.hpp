#pragma once

#include <Eigen/Dense>

#include "vargc/types.hpp"

namespace vargc {

/// Scaling (lowpass) filter of the Daubechies family, 2*order taps,
/// normalized so the taps sum to sqrt(2).  Deterministic; computed once per
/// order by spectral factorization and cached.
const Eigen::VectorXd& daubechies_filter(int order);

/// Multilevel periodized wavelet decomposition of a 1-D signal.  The signal
/// is zero-padded at the tail to the next multiple of 2^levels; the flat
/// coefficient vector is laid out [a_J | d_J | d_{J-1} | ... | d_1].
struct WaveletCoeffs {
    Eigen::VectorXd coeffs;
    int levels = 0;
    int order = 0;
    Eigen::Index original_length = 0;
    Eigen::Index pad_length = 0;

    Eigen::Index padded_length() const { return original_length + pad_length; }

    /// View of the deepest approximation band.
    Eigen::VectorBlock<const Eigen::VectorXd> approx() const;
    /// View of the detail band at `level` (1 = finest).
    Eigen::VectorBlock<const Eigen::VectorXd> detail(int level) const;
};

/// Number of decomposition levels chosen when none is given: deep enough
/// that the coarsest band is no shorter than the filter, capped at 4.
int auto_levels(Eigen::Index n, int order);

/// Forward transform.  levels == 0 selects auto_levels(n, order).
WaveletCoeffs dwt(const Eigen::VectorXd& signal, int order = 4, int levels = 0);

/// Inverse transform; returns exactly original_length samples (pad removed).
Eigen::VectorXd idwt(const WaveletCoeffs& coeffs);

/// Row-wise shrinkage in the wavelet domain: transform each row, soft
/// threshold every coefficient (approximation bands included), transform
/// back.  Solves min_E t*||W(E)||_1 + 0.5*||M - E||_F^2 row by row on the
/// padded domain.
Eigen::MatrixXd wavelet_shrink(const Eigen::MatrixXd& M, double t, int order = 4,
                               int levels = 0);

}  // namespace vargc
