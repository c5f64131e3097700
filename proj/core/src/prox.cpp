#include "vargc/prox.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <vector>

#include "vargc/companion.hpp"

namespace vargc {

double soft_threshold(double v, double t) {
    if (t < 0) throw InvalidInput("soft_threshold: negative threshold");
    const double mag = std::abs(v) - t;
    return mag > 0 ? (v > 0 ? mag : -mag) : 0.0;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double t) {
    if (t < 0) throw InvalidInput("soft_threshold: negative threshold");
    return v.unaryExpr([t](double a) {
        const double mag = std::abs(a) - t;
        return mag > 0 ? (a > 0 ? mag : -mag) : 0.0;
    });
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
    if (radius <= 0) throw InvalidInput("project_l1_ball: radius must be positive");
    if (!v.allFinite()) throw NumericError("project_l1_ball: non-finite input");
    const Eigen::VectorXd mag = v.cwiseAbs();
    if (mag.sum() <= radius) return v;

    // Sort magnitudes descending and locate the clipping level theta such
    // that sum_i max(|v_i| - theta, 0) == radius.
    std::vector<double> u(mag.data(), mag.data() + mag.size());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        cumsum += u[j];
        const double cand = (cumsum - radius) / static_cast<double>(j + 1);
        if (j + 1 == u.size() || u[j + 1] <= cand) {
            theta = cand;
            break;
        }
    }
    return v.unaryExpr([theta](double a) {
        const double mag_a = std::abs(a) - theta;
        return mag_a > 0 ? (a > 0 ? mag_a : -mag_a) : 0.0;
    });
}

Eigen::VectorXd prox_linf(const Eigen::VectorXd& v, double t) {
    if (t < 0) throw InvalidInput("prox_linf: negative threshold");
    if (t == 0) return v;
    return v - t * project_l1_ball(v / t, 1.0);
}

Eigen::VectorXd group_prox(const Eigen::VectorXd& v, double t) {
    if (t < 0) throw InvalidInput("group_prox: negative threshold");
    const double norm = v.norm();
    if (norm <= t) return Eigen::VectorXd::Zero(v.size());
    return (1.0 - t / norm) * v;
}

SingularSpectrum singular_spectrum(const Eigen::MatrixXd& X) {
    if (X.size() == 0) throw InvalidInput("singular_spectrum: empty matrix");
    if (!X.allFinite()) throw NumericError("singular_spectrum: non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return SingularSpectrum{svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

VarCoefficients prox_spectral(const Eigen::MatrixXd& X, double t) {
    if (X.rows() != X.cols() || X.rows() < 2 || X.rows() % 2 != 0)
        throw InvalidInput("prox_spectral: argument must be square of even size >= 2");
    if (t < 0) throw InvalidInput("prox_spectral: negative threshold");
    const int m_bar = static_cast<int>(X.cols()) / 2;
    if (t == 0) return extract(X, m_bar);

    SingularSpectrum s = singular_spectrum(X);
    const Eigen::VectorXd shrunk = prox_linf(s.sigma, t);
    const Eigen::MatrixXd rebuilt = s.U * shrunk.asDiagonal() * s.V.transpose();
    return extract(rebuilt, m_bar);
}

}  // namespace vargc
