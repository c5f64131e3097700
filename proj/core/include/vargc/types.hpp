#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "vargc/errors.hpp"

namespace vargc {

/// A pair of equally long real-valued signals sampled on a common clock.
/// Channel 0 is called y, channel 1 is called x throughout.
struct BivariateSeries {
    Eigen::VectorXd y;
    Eigen::VectorXd x;
    std::optional<double> sample_rate;  ///< Hz, informational only

    BivariateSeries() = default;
    BivariateSeries(Eigen::VectorXd y_in, Eigen::VectorXd x_in,
                    std::optional<double> rate = std::nullopt)
        : y(std::move(y_in)), x(std::move(x_in)), sample_rate(rate) {
        validate();
    }

    Eigen::Index n_samples() const { return y.size(); }

    void validate() const {
        if (y.size() != x.size())
            throw InvalidInput("series channels must have equal length");
        if (y.size() < 2) throw InvalidInput("series needs at least 2 samples");
        if (!y.allFinite() || !x.allFinite())
            throw InvalidInput("series contains non-finite values");
        if (sample_rate && *sample_rate <= 0.0)
            throw InvalidInput("sample_rate must be positive");
    }

    /// Sub-series covering samples [start, start + length).
    BivariateSeries window(Eigen::Index start, Eigen::Index length) const {
        if (start < 0 || length < 2 || start + length > n_samples())
            throw InvalidInput("window out of range");
        return BivariateSeries(y.segment(start, length), x.segment(start, length),
                               sample_rate);
    }
};

/// Coefficients of a two-channel autoregressive model with maximum lag m_bar.
/// Stored as the 2 x 2*m_bar matrix
///   [ a_yy(1..m) | a_yx(1..m) ]
///   [ a_xy(1..m) | a_xx(1..m) ]
/// so row 0 predicts y and row 1 predicts x; within a row the first m_bar
/// entries weight own/other-channel y-lags, the last m_bar entries x-lags.
struct VarCoefficients {
    Eigen::MatrixXd A;  ///< 2 x 2*m_bar
    int m_bar = 0;

    VarCoefficients() = default;
    VarCoefficients(Eigen::MatrixXd mat, int m) : A(std::move(mat)), m_bar(m) {
        if (m_bar < 1 || A.rows() != 2 || A.cols() != 2 * m_bar)
            throw InvalidInput("coefficient matrix must be 2 x 2*m_bar");
    }

    static VarCoefficients zero(int m_bar) {
        if (m_bar < 1) throw InvalidInput("m_bar must be >= 1");
        return VarCoefficients(Eigen::MatrixXd::Zero(2, 2 * m_bar), m_bar);
    }

    auto a_yy() const { return A.row(0).head(m_bar); }
    auto a_yx() const { return A.row(0).tail(m_bar); }
    auto a_xy() const { return A.row(1).head(m_bar); }
    auto a_xx() const { return A.row(1).tail(m_bar); }

    /// 2x2 matrix applied to the state k steps back (lags are 1-based).
    Eigen::Matrix2d lag_block(int k) const {
        if (k < 1 || k > m_bar) throw InvalidInput("lag out of range");
        Eigen::Matrix2d B;
        B << A(0, k - 1), A(0, m_bar + k - 1), A(1, k - 1), A(1, m_bar + k - 1);
        return B;
    }

    /// Row-major flattening [a_yy | a_yx | a_xy | a_xx], i.e. vec of A^T.
    Eigen::VectorXd to_vec() const {
        Eigen::VectorXd c(4 * m_bar);
        c.head(2 * m_bar) = A.row(0).transpose();
        c.tail(2 * m_bar) = A.row(1).transpose();
        return c;
    }

    static VarCoefficients from_vec(const Eigen::VectorXd& c, int m_bar) {
        if (m_bar < 1 || c.size() != 4 * m_bar)
            throw InvalidInput("flattened coefficient vector must have length 4*m_bar");
        Eigen::MatrixXd A(2, 2 * m_bar);
        A.row(0) = c.head(2 * m_bar).transpose();
        A.row(1) = c.tail(2 * m_bar).transpose();
        return VarCoefficients(std::move(A), m_bar);
    }
};

/// How latent group weights scale with group size in the nested-group
/// penalty.  SqrtSize makes larger prefixes proportionally more expensive,
/// which is what gives per-lag order resolution; Uniform degenerates to a
/// whole-block penalty (kept for comparison experiments).
enum class GroupWeightMode { SqrtSize, Uniform };

/// Tuning knobs shared by the solvers.  rho1/rho2/rho3 weight the three
/// consensus couplings (coefficient copy, latent copy, stability copy);
/// lambda scales the nested-group penalty, gamma the stability penalty;
/// primed values apply to the restricted (decoupled-channel) fit; kappa and
/// alpha only matter for the denoising solver.
struct HyperParams {
    double lambda = 0.1;
    double lambda_prime = -1.0;  ///< < 0 means "use lambda"
    double gamma = 1.0;
    double gamma_prime = -1.0;  ///< < 0 means "use gamma"
    double kappa = 0.1;         ///< weight of the sparse-excitation penalty
    double alpha = 1.0;         ///< weight of the data-fidelity term (denoiser)
    double rho1 = 1.0;
    double rho2 = 1.0;
    double rho3 = 1.0;
    int max_iters = 2000;
    double tol = 1e-6;
    GroupWeightMode group_weights = GroupWeightMode::SqrtSize;
    int wavelet_order = 4;    ///< Daubechies order used by the denoiser
    int wavelet_levels = 0;   ///< 0 = automatic depth
    bool estimate_lag_noise = true;  ///< denoiser: also correct the lag matrix
    bool record_iterates = false;    ///< keep per-iteration coefficient copies

    double lambda_restricted() const { return lambda_prime < 0 ? lambda : lambda_prime; }
    double gamma_restricted() const { return gamma_prime < 0 ? gamma : gamma_prime; }

    void validate() const {
        if (lambda < 0 || gamma < 0 || kappa < 0)
            throw InvalidInput("penalty weights must be non-negative");
        if (alpha <= 0) throw InvalidInput("alpha must be positive");
        if (rho1 <= 0 || rho2 <= 0 || rho3 <= 0)
            throw InvalidInput("rho1, rho2, rho3 must be positive");
        if (max_iters < 1) throw InvalidInput("max_iters must be >= 1");
        if (tol <= 0) throw InvalidInput("tol must be positive");
        if (wavelet_order < 2 || wavelet_order > 10)
            throw InvalidInput("wavelet_order must lie in [2, 10]");
        if (wavelet_levels < 0) throw InvalidInput("wavelet_levels must be >= 0");
    }
};

/// Outcome of a model fit.  `orders` are the per-block estimated lag depths
/// (yy, yx, xy, xx); `rss` holds per-channel residual sums of squares on the
/// data the model was fit to.
struct FitResult {
    VarCoefficients coefficients;
    Eigen::MatrixXd stability_copy;  ///< stability consensus copy at termination
    std::array<int, 4> orders{0, 0, 0, 0};
    Eigen::Vector2d rss = Eigen::Vector2d::Zero();
    int iterations = 0;
    bool converged = false;
    bool ridge_fallback = false;
    std::vector<double> residual_history;   ///< scaled primal residual per iteration
    std::vector<double> objective_history;  ///< surrogate objective per iteration
    std::vector<Eigen::MatrixXd> coefficient_trace;  ///< only if record_iterates
};

/// Normalized mean squared error ||estimate - truth||_F^2 / ||truth||_F^2.
double nmse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);

}  // namespace vargc
