#include "vargc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vargc/companion.hpp"
#include "vargc/wavelet.hpp"

namespace vargc {

namespace {

constexpr double kTerminalLo = 0.25;
constexpr double kTerminalHi = 0.40;
constexpr double kInteriorSd = 0.04;

// Scale lag-k blocks by s^k; every characteristic root moves by exactly s.
void geometric_rescale(VarCoefficients& coeffs, double s) {
    double sk = 1.0;
    for (int k = 1; k <= coeffs.m_bar; ++k) {
        sk *= s;
        coeffs.A(0, k - 1) *= sk;
        coeffs.A(0, coeffs.m_bar + k - 1) *= sk;
        coeffs.A(1, k - 1) *= sk;
        coeffs.A(1, coeffs.m_bar + k - 1) *= sk;
    }
}

}  // namespace

void SimConfig::validate() const {
    for (int o : orders)
        if (o < 0) throw InvalidInput("SimConfig: orders must be >= 0");
    if (n_samples < 2) throw InvalidInput("SimConfig: n_samples must be >= 2");
    if (innovation_var <= 0) throw InvalidInput("SimConfig: innovation_var must be positive");
    if (measurement_var < 0) throw InvalidInput("SimConfig: measurement_var must be >= 0");
    if (wavelet_sparsity < 0 || wavelet_sparsity >= 1)
        throw InvalidInput("SimConfig: wavelet_sparsity must lie in [0, 1)");
    if (arfima_d <= -0.5 || arfima_d >= 0.5)
        throw InvalidInput("SimConfig: arfima_d must lie in (-0.5, 0.5)");
    if (burn_in < 0) throw InvalidInput("SimConfig: burn_in must be >= 0");
    if (spectral_margin <= 0 || spectral_margin >= 1)
        throw InvalidInput("SimConfig: spectral_margin must lie in (0, 1)");
    if (wavelet_order < 2 || wavelet_order > 10)
        throw InvalidInput("SimConfig: wavelet_order must lie in [2, 10]");
    if (mode == SimMode::Var) {
        const int m_gen = *std::max_element(orders.begin(), orders.end());
        if (burn_in < std::max(1, m_gen))
            throw InvalidInput("SimConfig: burn_in must cover the model depth");
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

VarCoefficients gen_stable_var(const std::array<int, 4>& orders, double margin,
                               std::mt19937_64& rng) {
    for (int o : orders)
        if (o < 0) throw InvalidInput("gen_stable_var: orders must be >= 0");
    if (margin <= 0 || margin >= 1)
        throw InvalidInput("gen_stable_var: margin must lie in (0, 1)");
    const int m_bar = *std::max_element(orders.begin(), orders.end());
    if (m_bar == 0) return VarCoefficients::zero(1);

    VarCoefficients coeffs = VarCoefficients::zero(m_bar);
    std::normal_distribution<double> interior(0.0, kInteriorSd);
    std::uniform_real_distribution<double> terminal(kTerminalLo, kTerminalHi);
    std::bernoulli_distribution flip(0.5);
    for (int b = 0; b < 4; ++b) {
        const int row = b / 2;
        const int col0 = (b % 2) * m_bar;
        const int depth = orders[b];
        for (int k = 1; k < depth; ++k) coeffs.A(row, col0 + k - 1) = interior(rng);
        if (depth >= 1)
            coeffs.A(row, col0 + depth - 1) =
                (flip(rng) ? 1.0 : -1.0) * terminal(rng);
    }

    const double radius = eigen_radius(coeffs);
    if (radius >= 1.0 - margin)
        geometric_rescale(coeffs, (1.0 - margin) / radius);
    return coeffs;
}

Eigen::VectorXd gen_arfima(Eigen::Index n, double d, const Eigen::VectorXd& ar,
                           double innovation_sd, std::mt19937_64& rng) {
    if (n < 1) throw InvalidInput("gen_arfima: n must be >= 1");
    if (d <= -0.5 || d >= 0.5)
        throw InvalidInput("gen_arfima: d must lie in (-0.5, 0.5)");
    if (innovation_sd <= 0)
        throw InvalidInput("gen_arfima: innovation_sd must be positive");

    const Eigen::Index K = std::min<Eigen::Index>(n, 1000);
    Eigen::VectorXd psi(K);
    psi(0) = 1.0;
    for (Eigen::Index k = 1; k < K; ++k)
        psi(k) = psi(k - 1) * (static_cast<double>(k) - 1.0 + d) /
                 static_cast<double>(k);

    std::normal_distribution<double> gauss(0.0, innovation_sd);
    Eigen::VectorXd eps(n);
    for (Eigen::Index t = 0; t < n; ++t) eps(t) = gauss(rng);

    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::Index kmax = std::min<Eigen::Index>(t, K - 1);
        double acc = 0.0;
        for (Eigen::Index k = 0; k <= kmax; ++k) acc += psi(k) * eps(t - k);
        z(t) = acc;
    }
    if (ar.size() == 0) return z;

    // Stability check of the AR filter via its scalar companion matrix.
    const Eigen::Index p = ar.size();
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p, p);
    C.row(0) = ar.transpose();
    if (p > 1) C.block(1, 0, p - 1, p - 1).setIdentity();
    if (C.eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
        throw InvalidInput("gen_arfima: AR filter is unstable");

    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        double acc = z(t);
        for (Eigen::Index j = 1; j <= std::min<Eigen::Index>(t, p); ++j)
            acc += ar(j - 1) * y(t - j);
        y(t) = acc;
    }
    return y;
}

Eigen::VectorXd gen_wavelet_sparse_noise(Eigen::Index n, double sparsity,
                                         double amplitude, int order, int levels,
                                         std::mt19937_64& rng) {
    if (n < 2) throw InvalidInput("gen_wavelet_sparse_noise: n must be >= 2");
    if (sparsity < 0 || sparsity >= 1)
        throw InvalidInput("gen_wavelet_sparse_noise: sparsity must lie in [0, 1)");
    if (amplitude <= 0)
        throw InvalidInput("gen_wavelet_sparse_noise: amplitude must be positive");
    const int J = levels > 0 ? levels : auto_levels(n, order);

    // Shape the container via a forward transform of zeros, then plant.
    WaveletCoeffs wc = dwt(Eigen::VectorXd::Zero(n), order, J);
    const Eigen::Index np = wc.padded_length();
    const Eigen::Index count =
        static_cast<Eigen::Index>(std::floor((1.0 - sparsity) * n));

    std::uniform_int_distribution<Eigen::Index> position(0, np - 1);
    std::normal_distribution<double> value(0.0, amplitude);
    std::unordered_set<Eigen::Index> used;
    while (static_cast<Eigen::Index>(used.size()) < count) {
        const Eigen::Index pos = position(rng);
        if (used.insert(pos).second) wc.coeffs(pos) = value(rng);
    }
    return idwt(wc);
}

GroundTruth assemble_observation(const SimConfig& config) {
    config.validate();
    const Eigen::Index n = config.n_samples;
    const double innovation_sd = std::sqrt(config.innovation_var);

    std::mt19937_64 rng_coeffs(mix_seed(config.seed, 1));
    std::mt19937_64 rng_exc_y(mix_seed(config.seed, 2));
    std::mt19937_64 rng_exc_x(mix_seed(config.seed, 3));
    std::mt19937_64 rng_meas(mix_seed(config.seed, 4));

    GroundTruth truth;
    if (config.mode == SimMode::Arfima) {
        truth.coefficients = VarCoefficients::zero(1);
        truth.excitation = Eigen::MatrixXd::Zero(2, n);
        Eigen::VectorXd y = gen_arfima(n, config.arfima_d, Eigen::VectorXd(),
                                       innovation_sd, rng_exc_y);
        Eigen::VectorXd x = gen_arfima(n, config.arfima_d, Eigen::VectorXd(),
                                       innovation_sd, rng_exc_x);
        truth.clean = BivariateSeries(std::move(y), std::move(x));
    } else {
        truth.orders = config.orders;
        truth.coefficients =
            gen_stable_var(config.orders, config.spectral_margin, rng_coeffs);
        truth.spectral_radius = eigen_radius(truth.coefficients);
        const int m_gen = truth.coefficients.m_bar;
        const Eigen::Index total = config.burn_in + n;

        Eigen::MatrixXd exc(2, total);
        exc.row(0) = gen_wavelet_sparse_noise(total, config.wavelet_sparsity,
                                              innovation_sd, config.wavelet_order,
                                              0, rng_exc_y)
                         .transpose();
        exc.row(1) = gen_wavelet_sparse_noise(total, config.wavelet_sparsity,
                                              innovation_sd, config.wavelet_order,
                                              0, rng_exc_x)
                         .transpose();

        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, total);
        for (Eigen::Index t = 0; t < total; ++t) {
            Eigen::Vector2d acc = exc.col(t);
            for (int k = 1; k <= std::min<Eigen::Index>(t, m_gen); ++k)
                acc += truth.coefficients.lag_block(k) * s.col(t - k);
            s.col(t) = acc;
        }
        if (!s.allFinite())
            throw NumericError("assemble_observation: trajectory diverged");

        truth.clean = BivariateSeries(
            s.row(0).tail(n).transpose(), s.row(1).tail(n).transpose());
        truth.excitation = exc.rightCols(n);
    }

    Eigen::VectorXd noisy_y = truth.clean.y;
    Eigen::VectorXd noisy_x = truth.clean.x;
    if (config.measurement_var > 0) {
        std::normal_distribution<double> meas(0.0, std::sqrt(config.measurement_var));
        for (Eigen::Index t = 0; t < n; ++t) noisy_y(t) += meas(rng_meas);
        for (Eigen::Index t = 0; t < n; ++t) noisy_x(t) += meas(rng_meas);
    }
    truth.observed = BivariateSeries(std::move(noisy_y), std::move(noisy_x));
    return truth;
}

Eigen::MatrixXd autoregressive_component(const GroundTruth& truth, int m_bar) {
    const Eigen::Index n = truth.clean.n_samples();
    if (m_bar < 1 || m_bar >= n)
        throw InvalidInput("autoregressive_component: m_bar out of range");
    if (truth.excitation.cols() != n)
        throw InvalidInput("autoregressive_component: excitation length mismatch");
    Eigen::MatrixXd R(2, n - m_bar);
    for (Eigen::Index j = 0; j < n - m_bar; ++j) {
        R(0, j) = truth.clean.y(m_bar + j) - truth.excitation(0, m_bar + j);
        R(1, j) = truth.clean.x(m_bar + j) - truth.excitation(1, m_bar + j);
    }
    return R;
}

}  // namespace vargc
