#include "vargc/ss_admm.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <functional>
#include <memory>

#include "vargc/companion.hpp"
#include "vargc/prox.hpp"

namespace vargc {

namespace {

// Ties the shared iteration loop to a concrete regression layout: the Gram
// solve (with ridge rho1 + rho3 folded in), the cross-moment matrix and the
// residual evaluators are all that differ between the coupled and the
// channel-decoupled fits.
struct DesignOps {
    int m_bar = 0;
    Eigen::MatrixXd YHt;  // 2 x 2m
    std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> solve;
    std::function<double(const Eigen::MatrixXd&)> fidelity;
    std::function<Eigen::Vector2d(const Eigen::MatrixXd&)> rss;
};

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

// Argument handed to the spectral prox: the companion form of W with the
// shifted identity doubled, which is exactly 2*Gamma(W/2).  The doubling is
// what makes ||W - Z||_F^2 equal ||arg - Gamma(Z)||_F^2 up to a constant.
Eigen::MatrixXd scaled_companion_arg(const Eigen::MatrixXd& W, int m_bar) {
    CompanionMatrix cm = embed(VarCoefficients(W, m_bar));
    if (m_bar > 1)
        cm.M.block(2, 0, 2 * (m_bar - 1), 2 * (m_bar - 1)) *= 2.0;
    return cm.M;
}

FitResult run_admm(const DesignOps& ops, const HyperParams& hp, double lambda,
                   double gamma) {
    const int m = ops.m_bar;
    const int nc = 4 * m;  // coordinates == groups
    const GroupStructure groups(m, hp.group_weights);

    FitResult res;
    AdmmState st;
    st.A = ops.solve(ops.YHt);  // ridge-regularized least-squares start
    st.Z = st.A;
    st.U3 = Eigen::MatrixXd::Zero(2, 2 * m);
    LogState log = LogState::zero(m);
    log.c = flatten(st.A);

    bool converged = false;
    int iters_done = 0;
    for (int iter = 1; iter <= hp.max_iters; ++iter) {
        iters_done = iter;

        // Coefficient update (closed form, cached factorization).
        const Eigen::MatrixXd rhs = hp.rho3 * (st.Z - st.U3) +
                                    hp.rho1 * unflatten(log.c - log.u1) + ops.YHt;
        st.A = ops.solve(rhs);
        if (!st.A.allFinite())
            throw NumericError("fit diverged: non-finite coefficients");
        const Eigen::VectorXd cA = flatten(st.A);

        // Latent updates: one group shrink per nested prefix.  The drive
        // term q - p - u2 reconstructs the consensus copy each column sees.
        const Eigen::VectorXd drive = log.q - log.p - log.u2;
        for (int g = 0; g < nc; ++g) {
            const int off = groups.offset_of(g);
            const int len = groups.size_of(g);
            const Eigen::VectorXd v =
                log.P.col(g).segment(off, len) + drive.segment(off, len);
            log.P.col(g).setZero();
            log.P.col(g).segment(off, len) =
                group_prox(v, lambda * groups.weight(g) / hp.rho2);
        }
        log.p = log.P.rowwise().sum() / nc;
        log.q = (log.c + hp.rho2 * (log.u2 + log.p)) / (hp.rho2 + nc);
        log.c = (nc * log.q + hp.rho1 * (cA + log.u1)) / (1.0 + hp.rho1);

        // Stability update through the spectral prox.
        st.Z = prox_spectral(scaled_companion_arg(st.A + st.U3, m),
                             gamma / hp.rho3)
                   .A;

        // Scaled dual ascent.
        log.u1 += cA - log.c;
        log.u2 += log.p - log.q;
        st.U3 += st.A - st.Z;

        const double resid = std::max({(st.A - st.Z).norm(), (cA - log.c).norm(),
                                       (log.p - log.q).norm()}) /
                             (1.0 + st.A.norm());
        res.residual_history.push_back(resid);
        double penalty = 0.0;
        for (int g = 0; g < nc; ++g)
            penalty += groups.weight(g) * log.P.col(g).norm();
        res.objective_history.push_back(ops.fidelity(st.A) + lambda * penalty);
        if (hp.record_iterates) res.coefficient_trace.push_back(st.A);

        if (resid < hp.tol) {
            converged = true;
            break;
        }
    }

    const double c_scale = log.c.cwiseAbs().maxCoeff();
    res.orders = estimate_orders(log.P, m, 1e-6 * c_scale);
    res.coefficients = VarCoefficients(st.A, m);
    res.stability_copy = st.Z;
    res.rss = ops.rss(st.A);
    res.iterations = iters_done;
    res.converged = converged;
    return res;
}

}  // namespace

Eigen::MatrixXd update_A(const LagDesign& design, const AdmmState& state,
                         const LogState& log, const HyperParams& params) {
    params.validate();
    const int m = design.m_bar;
    Eigen::MatrixXd K = design.H * design.H.transpose();
    K.diagonal().array() += params.rho1 + params.rho3;
    const Eigen::MatrixXd rhs = params.rho3 * (state.Z - state.U3) +
                                params.rho1 * unflatten(log.c - log.u1) +
                                design.Y * design.H.transpose();
    return K.llt().solve(rhs.transpose()).transpose();
}

std::array<int, 4> estimate_orders(const Eigen::MatrixXd& P, int m_bar,
                                   double zero_tol) {
    if (m_bar < 1 || P.rows() != 4 * m_bar)
        throw InvalidInput("estimate_orders: P must have 4*m_bar rows");
    if (zero_tol < 0) throw InvalidInput("estimate_orders: negative tolerance");
    const Eigen::VectorXd agg = P.cwiseAbs().rowwise().sum();
    std::array<int, 4> orders{0, 0, 0, 0};
    for (int b = 0; b < 4; ++b)
        for (int i = 0; i < m_bar; ++i)
            if (agg(b * m_bar + i) > zero_tol) ++orders[b];
    return orders;
}

FitResult fit_unrestricted(const LagDesign& design, const HyperParams& params) {
    params.validate();
    const int m = design.m_bar;
    if (m < 1 || design.H.rows() != 2 * m || design.Y.cols() != design.H.cols() ||
        design.Y.rows() != 2)
        throw InvalidInput("fit_unrestricted: malformed design");

    Eigen::MatrixXd K = design.H * design.H.transpose();
    K.diagonal().array() += params.rho1 + params.rho3;
    auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(K);
    if (llt->info() != Eigen::Success)
        throw NumericError("fit_unrestricted: Gram factorization failed");

    DesignOps ops;
    ops.m_bar = m;
    ops.YHt = design.Y * design.H.transpose();
    ops.solve = [llt](const Eigen::MatrixXd& rhs) {
        return Eigen::MatrixXd(llt->solve(rhs.transpose()).transpose());
    };
    ops.fidelity = [&design](const Eigen::MatrixXd& A) {
        return 0.5 * (design.Y - A * design.H).squaredNorm();
    };
    ops.rss = [&design](const Eigen::MatrixXd& A) {
        return channel_rss(design.Y, A, design.H);
    };
    return run_admm(ops, params, params.lambda, params.gamma);
}

FitResult fit_restricted(const RestrictedDesign& design, const HyperParams& params) {
    params.validate();
    const int m = design.m_bar;
    if (m < 1 || design.Hy.rows() != m || design.Hx.rows() != m ||
        design.y.size() != design.Hy.cols() || design.x.size() != design.Hx.cols())
        throw InvalidInput("fit_restricted: malformed design");

    Eigen::MatrixXd Ky = design.Hy * design.Hy.transpose();
    Eigen::MatrixXd Kx = design.Hx * design.Hx.transpose();
    Ky.diagonal().array() += params.rho1 + params.rho3;
    Kx.diagonal().array() += params.rho1 + params.rho3;
    auto llty = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(Ky);
    auto lltx = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(Kx);
    if (llty->info() != Eigen::Success || lltx->info() != Eigen::Success)
        throw NumericError("fit_restricted: Gram factorization failed");

    DesignOps ops;
    ops.m_bar = m;
    ops.YHt = design.YHt();
    // The conceptual design is block-diagonal, so the Gram solve splits into
    // independent y-lag and x-lag solves; zero blocks are never touched.
    ops.solve = [llty, lltx, m](const Eigen::MatrixXd& rhs) {
        Eigen::MatrixXd out(2, 2 * m);
        out.leftCols(m) = llty->solve(rhs.leftCols(m).transpose()).transpose();
        out.rightCols(m) = lltx->solve(rhs.rightCols(m).transpose()).transpose();
        return out;
    };
    ops.fidelity = [&design, m](const Eigen::MatrixXd& A) {
        return 0.5 * ((design.y - A.row(0).head(m) * design.Hy).squaredNorm() +
                      (A.row(0).tail(m) * design.Hx).squaredNorm() +
                      (A.row(1).head(m) * design.Hy).squaredNorm() +
                      (design.x - A.row(1).tail(m) * design.Hx).squaredNorm());
    };
    ops.rss = [&design, m](const Eigen::MatrixXd& A) {
        return design.rss(VarCoefficients(A, m));
    };

    FitResult res =
        run_admm(ops, params, params.lambda_restricted(), params.gamma_restricted());
    // Cross-coupling positions only ever scored against zero targets; drop
    // them from the reported model.
    res.coefficients.A.row(0).tail(m).setZero();
    res.coefficients.A.row(1).head(m).setZero();
    res.orders = {res.orders[0], 0, 0, res.orders[3]};
    res.rss = design.rss(res.coefficients);
    return res;
}

}  // namespace vargc
