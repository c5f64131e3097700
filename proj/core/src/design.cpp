#include "vargc/design.hpp"

namespace vargc {

double nmse(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
        throw InvalidInput("nmse: shape mismatch");
    const double denom = truth.squaredNorm();
    if (denom == 0.0) throw InvalidInput("nmse: reference has zero norm");
    return (estimate - truth).squaredNorm() / denom;
}

LagDesign build_lag_design(const BivariateSeries& series, int m_bar) {
    series.validate();
    if (m_bar < 1) throw InvalidInput("m_bar must be >= 1");
    const Eigen::Index n = series.n_samples();
    if (n < 2 * m_bar + 2)
        throw InvalidInput("series too short: need n_samples >= 2*m_bar + 2");

    const Eigen::Index T = n - m_bar;
    LagDesign d;
    d.m_bar = m_bar;
    d.Y.resize(2, T);
    d.H.resize(2 * m_bar, T);
    for (Eigen::Index j = 0; j < T; ++j) {
        const Eigen::Index t = m_bar + j;  // current sample index
        d.Y(0, j) = series.y(t);
        d.Y(1, j) = series.x(t);
        for (int k = 1; k <= m_bar; ++k) {
            d.H(k - 1, j) = series.y(t - k);
            d.H(m_bar + k - 1, j) = series.x(t - k);
        }
    }
    return d;
}

RestrictedDesign build_restricted_design(const BivariateSeries& series, int m_bar) {
    LagDesign d = build_lag_design(series, m_bar);
    RestrictedDesign r;
    r.m_bar = m_bar;
    r.y = d.Y.row(0);
    r.x = d.Y.row(1);
    r.Hy = d.H.topRows(m_bar);
    r.Hx = d.H.bottomRows(m_bar);
    return r;
}

Eigen::MatrixXd RestrictedDesign::full_Y() const {
    const Eigen::Index t = T();
    Eigen::MatrixXd Yf = Eigen::MatrixXd::Zero(2, 2 * t);
    Yf.row(0).head(t) = y;
    Yf.row(1).tail(t) = x;
    return Yf;
}

Eigen::MatrixXd RestrictedDesign::full_H() const {
    const Eigen::Index t = T();
    Eigen::MatrixXd Hf = Eigen::MatrixXd::Zero(2 * m_bar, 2 * t);
    Hf.topLeftCorner(m_bar, t) = Hy;
    Hf.bottomRightCorner(m_bar, t) = Hx;
    return Hf;
}

Eigen::MatrixXd RestrictedDesign::HHt() const {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * m_bar, 2 * m_bar);
    G.topLeftCorner(m_bar, m_bar) = Hy * Hy.transpose();
    G.bottomRightCorner(m_bar, m_bar) = Hx * Hx.transpose();
    return G;
}

Eigen::MatrixXd RestrictedDesign::YHt() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2, 2 * m_bar);
    M.row(0).head(m_bar) = y * Hy.transpose();
    M.row(1).tail(m_bar) = x * Hx.transpose();
    return M;
}

Eigen::Vector2d RestrictedDesign::rss(const VarCoefficients& coeffs) const {
    if (coeffs.m_bar != m_bar) throw InvalidInput("coefficient m_bar mismatch");
    Eigen::Vector2d out;
    out(0) = (y - coeffs.a_yy() * Hy).squaredNorm();
    out(1) = (x - coeffs.a_xx() * Hx).squaredNorm();
    return out;
}

Eigen::Vector2d channel_rss(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& H) {
    if (A.cols() != H.rows() || Y.cols() != H.cols() || Y.rows() != A.rows())
        throw InvalidInput("channel_rss: shape mismatch");
    const Eigen::MatrixXd resid = Y - A * H;
    return resid.rowwise().squaredNorm();
}

}  // namespace vargc
