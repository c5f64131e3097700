#include "vargc/ssd_admm.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "vargc/companion.hpp"
#include "vargc/prox.hpp"
#include "vargc/wavelet.hpp"

namespace vargc {

namespace {

Eigen::VectorXd flatten(const Eigen::MatrixXd& A) {
    const Eigen::Index w = A.cols();
    Eigen::VectorXd c(2 * w);
    c.head(w) = A.row(0).transpose();
    c.tail(w) = A.row(1).transpose();
    return c;
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& c) {
    const Eigen::Index w = c.size() / 2;
    Eigen::MatrixXd A(2, w);
    A.row(0) = c.head(w).transpose();
    A.row(1) = c.tail(w).transpose();
    return A;
}

Eigen::MatrixXd scaled_companion_arg(const Eigen::MatrixXd& W, int m_bar) {
    CompanionMatrix cm = embed(VarCoefficients(W, m_bar));
    if (m_bar > 1)
        cm.M.block(2, 0, 2 * (m_bar - 1), 2 * (m_bar - 1)) *= 2.0;
    return cm.M;
}

double wavelet_l1(const Eigen::MatrixXd& E, const HyperParams& hp) {
    double s = 0.0;
    for (Eigen::Index r = 0; r < E.rows(); ++r)
        s += dwt(E.row(r).transpose(), hp.wavelet_order, hp.wavelet_levels)
                 .coeffs.lpNorm<1>();
    return s;
}

}  // namespace

Eigen::MatrixXd update_A_noisy(const LagDesign& noisy, const Eigen::MatrixXd& H,
                               const Eigen::MatrixXd& E, const AdmmState& state,
                               const LogState& log, const HyperParams& params) {
    params.validate();
    Eigen::MatrixXd K = params.alpha * (H * H.transpose());
    K.diagonal().array() += params.rho1 + params.rho3;
    const Eigen::MatrixXd rhs = params.rho3 * (state.Z - state.U3) +
                                params.rho1 * unflatten(log.c - log.u1) +
                                params.alpha * ((noisy.Y - E) * H.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success)
        throw NumericError("update_A_noisy: Gram factorization failed");
    return llt.solve(rhs.transpose()).transpose();
}

Eigen::MatrixXd update_E(const Eigen::MatrixXd& R, const HyperParams& params) {
    params.validate();
    return wavelet_shrink(R, params.kappa / params.alpha, params.wavelet_order,
                          params.wavelet_levels);
}

Eigen::VectorXd solve_dh_first_column(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& h,
                                      const Eigen::Vector2d& y0,
                                      const Eigen::Vector2d& e0,
                                      const Eigen::Vector2d& dy0,
                                      bool* ridge_fallback) {
    if (A.rows() != 2 || A.cols() != h.size())
        throw InvalidInput("solve_dh_first_column: shape mismatch");
    const Eigen::Vector2d rhs = A * h - y0 + e0 + dy0;
    Eigen::Matrix2d G = A * A.transpose();
    const double tr = G.trace();
    const double det = G.determinant();
    if (!(det > 1e-12 * tr * tr) || !std::isfinite(det)) {
        G.diagonal().array() += 1e-8 * (tr > 0 ? tr : 1.0);
        if (ridge_fallback) *ridge_fallback = true;
    }
    return A.transpose() * G.ldlt().solve(rhs);
}

Eigen::MatrixXd toeplitz_complete(const Eigen::VectorXd& first_col,
                                  const Eigen::RowVectorXd& row_y,
                                  const Eigen::RowVectorXd& row_x, int m_bar) {
    if (m_bar < 1 || first_col.size() != 2 * m_bar)
        throw InvalidInput("toeplitz_complete: first_col must have length 2*m_bar");
    if (row_y.size() != row_x.size() || row_y.size() < 1)
        throw InvalidInput("toeplitz_complete: rows must be equally long and non-empty");
    const Eigen::Index T = row_y.size() + 1;
    Eigen::MatrixXd M(2 * m_bar, T);
    for (int b = 0; b < 2; ++b) {
        const int o = b * m_bar;
        const Eigen::RowVectorXd& row = b == 0 ? row_y : row_x;
        for (int i = 0; i < m_bar; ++i) M(o + i, 0) = first_col(o + i);
        for (Eigen::Index j = 1; j < T; ++j) {
            M(o, j) = row(j - 1);
            for (int i = 1; i < m_bar; ++i) M(o + i, j) = M(o + i - 1, j - 1);
        }
    }
    return M;
}

DenoiseResult fit_denoise(const LagDesign& noisy, const HyperParams& params) {
    params.validate();
    const int m = noisy.m_bar;
    if (m < 1 || noisy.H.rows() != 2 * m || noisy.Y.cols() != noisy.H.cols() ||
        noisy.Y.rows() != 2)
        throw InvalidInput("fit_denoise: malformed design");
    const Eigen::Index T = noisy.T();
    const int nc = 4 * m;
    const GroupStructure groups(m, params.group_weights);
    const double shrink_t = params.kappa / params.alpha;

    DenoiseResult res;
    AdmmState st;
    LogState log = LogState::zero(m);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2, T);
    Eigen::MatrixXd dY = Eigen::MatrixXd::Zero(2, T);
    Eigen::MatrixXd dH = Eigen::MatrixXd::Zero(2 * m, T);
    Eigen::MatrixXd H = noisy.H;

    {
        // Ridge-regularized start on the raw design.
        Eigen::MatrixXd K = params.alpha * (H * H.transpose());
        K.diagonal().array() += params.rho1 + params.rho3;
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        if (llt.info() != Eigen::Success)
            throw NumericError("fit_denoise: Gram factorization failed");
        st.A = llt.solve((params.alpha * (noisy.Y * H.transpose())).transpose())
                   .transpose();
        st.Z = st.A;
        st.U3 = Eigen::MatrixXd::Zero(2, 2 * m);
        log.c = flatten(st.A);
    }

    // Best iterate seen, for the oscillation guard.
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_A = st.A, best_P = log.P, best_E = E, best_dY = dY,
                    best_dH = dH, best_H = H;
    Eigen::VectorXd best_c = log.c;

    bool converged = false;
    bool oscillated = false;
    int iters_done = 0;
    double prev_obj = std::numeric_limits<double>::quiet_NaN();
    double prev_delta = 0.0;
    int flip_run = 0;

    // From a cold coefficient start the first residual is dominated by the
    // still-unexplained autoregressive part; shrinking it would route signal
    // into E / dY and the lag completion would subtract it from H, which the
    // coefficient update cannot undo.  Run the noise-free updates first and
    // enable the noise estimates once the coefficient subproblem settles.
    const int warm_up = std::min(200, params.max_iters / 2);
    bool noise_on = false;
    double last_resid = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= params.max_iters; ++iter) {
        iters_done = iter;
        if (!noise_on && (iter > warm_up || last_resid < params.tol))
            noise_on = true;

        // Coefficient update against the current denoised lag matrix.  H
        // changes between iterations, so the Gram system is re-factorized.
        st.A = update_A_noisy(noisy, H, E, st, log, params);
        if (!st.A.allFinite())
            throw NumericError("fit_denoise diverged: non-finite coefficients");
        const Eigen::VectorXd cA = flatten(st.A);

        // Latent nested-group updates (identical to the plain solver).
        const Eigen::VectorXd drive = log.q - log.p - log.u2;
        for (int g = 0; g < nc; ++g) {
            const int off = groups.offset_of(g);
            const int len = groups.size_of(g);
            const Eigen::VectorXd v =
                log.P.col(g).segment(off, len) + drive.segment(off, len);
            log.P.col(g).setZero();
            log.P.col(g).segment(off, len) =
                group_prox(v, params.lambda * groups.weight(g) / params.rho2);
        }
        log.p = log.P.rowwise().sum() / nc;
        log.q = (log.c + params.rho2 * (log.u2 + log.p)) / (params.rho2 + nc);
        log.c = (nc * log.q + params.rho1 * (cA + log.u1)) / (1.0 + params.rho1);

        // Stability update.
        st.Z = prox_spectral(scaled_companion_arg(st.A + st.U3, m),
                             params.gamma / params.rho3)
                   .A;

        const Eigen::MatrixXd H_prev = H;
        if (noise_on) {
            // Excitation update: wavelet shrinkage of the fit residual.
            const Eigen::MatrixXd R = noisy.Y - st.A * H;
            E = wavelet_shrink(R, shrink_t, params.wavelet_order,
                               params.wavelet_levels);
            dY = R - E;

            // Lag-noise completion.
            if (params.estimate_lag_noise) {
                bool ridge = false;
                const Eigen::VectorXd dh = solve_dh_first_column(
                    st.A, noisy.H.col(0), noisy.Y.col(0), E.col(0), dY.col(0),
                    &ridge);
                res.ridge_fallback = res.ridge_fallback || ridge;
                dH = toeplitz_complete(dh, dY.row(0).head(T - 1),
                                       dY.row(1).head(T - 1), m);
                H = noisy.H - dH;
            }
        }

        // Scaled dual ascent.
        log.u1 += cA - log.c;
        log.u2 += log.p - log.q;
        st.U3 += st.A - st.Z;

        // Re-balance the target-side noise against the updated lag matrix so
        // the decomposition identity holds exactly at the iteration boundary
        // (the next iteration recomputes dY from its own residual anyway).
        dY = noisy.Y - st.A * H - E;
        res.identity_error_max =
            std::max(res.identity_error_max,
                     (noisy.Y - st.A * H - E - dY).cwiseAbs().maxCoeff());

        const double resid = std::max({(st.A - st.Z).norm(), (cA - log.c).norm(),
                                       (log.p - log.q).norm()}) /
                             (1.0 + st.A.norm());
        last_resid = resid;
        const double h_change = (H - H_prev).norm() / (1.0 + H_prev.norm());
        res.residual_history.push_back(resid);

        double penalty = 0.0;
        for (int g = 0; g < nc; ++g)
            penalty += groups.weight(g) * log.P.col(g).norm();
        const double obj = 0.5 * params.alpha * dY.squaredNorm() +
                           params.lambda * penalty +
                           params.kappa * wavelet_l1(E, params);
        res.objective_history.push_back(obj);

        if (obj < best_obj) {
            best_obj = obj;
            best_A = st.A;
            best_P = log.P;
            best_c = log.c;
            best_E = E;
            best_dY = dY;
            best_dH = dH;
            best_H = H;
        }

        if (std::isfinite(prev_obj)) {
            const double delta = obj - prev_obj;
            flip_run = (delta * prev_delta < 0.0) ? flip_run + 1 : 0;
            prev_delta = delta;
        }
        prev_obj = obj;

        if (noise_on && resid < params.tol && h_change < params.tol) {
            converged = true;
            break;
        }
        if (flip_run > 50) {
            // Alternating objective: the joint updates are cycling, not
            // settling.  Keep the best iterate seen and stop.
            oscillated = true;
            st.A = best_A;
            log.P = best_P;
            log.c = best_c;
            E = best_E;
            dY = best_dY;
            dH = best_dH;
            H = best_H;
            break;
        }
    }

    const double c_scale = log.c.cwiseAbs().maxCoeff();
    res.coefficients = VarCoefficients(st.A, m);
    res.orders = estimate_orders(log.P, m, 1e-6 * c_scale);
    res.E = std::move(E);
    res.dY = std::move(dY);
    res.dH = std::move(dH);
    res.H_clean = std::move(H);
    res.Y_clean = noisy.Y - res.dY;
    res.rss = channel_rss(res.Y_clean, res.coefficients.A, res.H_clean);
    res.iterations = iters_done;
    res.converged = converged;
    res.oscillation_stop = oscillated;
    return res;
}

BivariateSeries denoised_series(const DenoiseResult& result) {
    const int m = result.coefficients.m_bar;
    const Eigen::Index T = result.Y_clean.cols();
    if (m < 1 || result.H_clean.rows() != 2 * m || result.H_clean.cols() != T)
        throw InvalidInput("denoised_series: inconsistent result");
    Eigen::VectorXd y(m + T), x(m + T);
    for (int i = 0; i < m; ++i) {
        y(i) = result.H_clean(m - 1 - i, 0);
        x(i) = result.H_clean(2 * m - 1 - i, 0);
    }
    y.tail(T) = result.Y_clean.row(0).transpose();
    x.tail(T) = result.Y_clean.row(1).transpose();
    return BivariateSeries(std::move(y), std::move(x));
}

}  // namespace vargc
