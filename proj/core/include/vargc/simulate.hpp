#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <random>

#include "vargc/types.hpp"

namespace vargc {

/// What drives the synthetic series.
///   Var     a two-channel autoregression with known per-block lag depths,
///           excited by wavelet-sparse innovations (the causal scenario)
///   Arfima  two independent long-memory channels (the null scenario)
enum class SimMode { Var, Arfima };

/// Generator settings.  Everything is reproducible from `seed`; independent
/// random streams are derived per purpose, so e.g. changing the measurement
/// noise level never changes the trajectory.
struct SimConfig {
    std::array<int, 4> orders{17, 21, 20, 18};  ///< yy, yx, xy, xx lag depths
    Eigen::Index n_samples = 942;
    double innovation_var = 1.0;      ///< variance of planted wavelet coefficients
    double measurement_var = 0.01;    ///< additive observation-noise variance
    double wavelet_sparsity = 0.7;    ///< fraction of wavelet coefficients left zero
    double arfima_d = 0.3;            ///< long-memory exponent (Arfima mode)
    Eigen::Index burn_in = 500;       ///< discarded warm-up samples (Var mode)
    std::uint64_t seed = 0;
    double spectral_margin = 0.02;    ///< keep characteristic roots below 1 - margin
    int wavelet_order = 4;            ///< family order of the planted excitation
    SimMode mode = SimMode::Var;

    void validate() const;
};

/// A generated scenario with everything needed to score an estimator.
struct GroundTruth {
    BivariateSeries observed;        ///< clean + measurement noise
    BivariateSeries clean;           ///< noise-free trajectory
    VarCoefficients coefficients;    ///< generating model (zero model in Arfima mode)
    std::array<int, 4> orders{0, 0, 0, 0};
    Eigen::MatrixXd excitation;      ///< 2 x n innovations over the kept window
    double spectral_radius = 0.0;
};

/// Derive an independent 64-bit seed for stream `stream` of a base seed
/// (splitmix64 of seed xor stream * golden-ratio constant).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Draw coefficients whose per-block supports are exactly the requested
/// prefix depths: the terminal lag of each block gets a clearly detectable
/// magnitude (0.25..0.40, random sign), interior lags small Gaussian values.
/// If the characteristic roots reach 1 - margin the lag-k blocks are scaled
/// by s^k, which moves every root by exactly s, placing the radius on
/// 1 - margin.  All-zero depths give the zero model of lag 1.
VarCoefficients gen_stable_var(const std::array<int, 4>& orders, double margin,
                               std::mt19937_64& rng);

/// Long-memory (fractionally integrated) noise of length n: Gaussian
/// innovations passed through the truncated MA(inf) expansion of
/// (1 - B)^{-d} (psi_0 = 1, psi_k = psi_{k-1} (k - 1 + d) / k, at most 1000
/// terms), then optionally through a stable AR filter `ar`.
Eigen::VectorXd gen_arfima(Eigen::Index n, double d, const Eigen::VectorXd& ar,
                           double innovation_sd, std::mt19937_64& rng);

/// A signal that is sparse in the wavelet domain: floor((1 - sparsity) * n)
/// coefficients are planted at distinct uniform positions of the padded
/// transform domain with N(0, amplitude^2) values, and the inverse
/// transform is truncated to n samples.  levels == 0 selects the automatic
/// depth.
Eigen::VectorXd gen_wavelet_sparse_noise(Eigen::Index n, double sparsity,
                                         double amplitude, int order, int levels,
                                         std::mt19937_64& rng);

/// Run the full generator for a configuration.  In Var mode the recursion
/// is driven by wavelet-sparse excitation and warmed up for burn_in samples
/// (burn_in must be at least the model depth), so on the kept window the
/// clean trajectory satisfies the model equations exactly with the stored
/// excitation.  Measurement noise is added on top.
GroundTruth assemble_observation(const SimConfig& config);

/// The model-explained part of the clean trajectory over the regression
/// columns of a depth-m_bar design: column j holds clean(m_bar + j) minus
/// the stored excitation at that sample (2 x (n - m_bar)).  In Var mode this
/// equals A_true times the clean lag matrix exactly, which makes it the
/// natural reference for scoring a fitted model's reconstruction.
Eigen::MatrixXd autoregressive_component(const GroundTruth& truth, int m_bar);

}  // namespace vargc
