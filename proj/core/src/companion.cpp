#include "vargc/companion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace vargc {

CompanionMatrix embed(const VarCoefficients& coeffs) {
    const int m = coeffs.m_bar;
    CompanionMatrix cm;
    cm.m_bar = m;
    cm.M = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int k = 1; k <= m; ++k)
        cm.M.block<2, 2>(0, 2 * (k - 1)) = coeffs.lag_block(k);
    if (m > 1)
        cm.M.block(2, 0, 2 * (m - 1), 2 * (m - 1)) =
            Eigen::MatrixXd::Identity(2 * (m - 1), 2 * (m - 1));
    return cm;
}

VarCoefficients extract(const Eigen::MatrixXd& M, int m_bar) {
    if (m_bar < 1 || M.rows() < 2 || M.cols() != 2 * m_bar)
        throw InvalidInput("extract: matrix must have 2*m_bar columns and >= 2 rows");
    VarCoefficients out = VarCoefficients::zero(m_bar);
    for (int k = 1; k <= m_bar; ++k) {
        out.A(0, k - 1) = M(0, 2 * (k - 1));
        out.A(0, m_bar + k - 1) = M(0, 2 * (k - 1) + 1);
        out.A(1, k - 1) = M(1, 2 * (k - 1));
        out.A(1, m_bar + k - 1) = M(1, 2 * (k - 1) + 1);
    }
    return out;
}

double spectral_norm(const Eigen::MatrixXd& M) {
    if (M.size() == 0) throw InvalidInput("spectral_norm: empty matrix");
    if (!M.allFinite()) throw NumericError("spectral_norm: non-finite entries");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
}

double eigen_radius(const VarCoefficients& coeffs) {
    const CompanionMatrix cm = embed(coeffs);
    Eigen::EigenSolver<Eigen::MatrixXd> es(cm.M, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericError("eigen_radius: eigenvalue iteration failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const VarCoefficients& coeffs, double eps) {
    return eigen_radius(coeffs) < 1.0 - eps;
}

}  // namespace vargc
