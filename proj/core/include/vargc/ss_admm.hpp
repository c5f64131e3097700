#pragma once

#include <Eigen/Dense>
#include <array>

#include "vargc/design.hpp"
#include "vargc/types.hpp"

namespace vargc {

/// Nested prefix groups over the flattened coefficient vector.  The 4*m_bar
/// coordinates split into four blocks (yy, yx, xy, xx); each block carries
/// m_bar groups {1}, {1,2}, ..., {1..m_bar}, so selecting a group activates
/// every lag below it and the per-block support is always a prefix.
struct GroupStructure {
    int m_bar = 0;
    GroupWeightMode mode = GroupWeightMode::SqrtSize;

    explicit GroupStructure(int m, GroupWeightMode w = GroupWeightMode::SqrtSize)
        : m_bar(m), mode(w) {
        if (m < 1) throw InvalidInput("GroupStructure: m_bar must be >= 1");
    }

    int count() const { return 4 * m_bar; }
    int block_of(int g) const { return g / m_bar; }
    int size_of(int g) const { return g % m_bar + 1; }
    int offset_of(int g) const { return block_of(g) * m_bar; }
    double weight(int g) const {
        return mode == GroupWeightMode::Uniform
                   ? 1.0
                   : std::sqrt(static_cast<double>(size_of(g)));
    }
};

/// Latent-decomposition state of the nested-group penalty.  P holds one
/// latent column per group (restricted to that group's support); p is the
/// column mean, q the consensus copy, c the coefficient copy, u1/u2 scaled
/// duals.
struct LogState {
    Eigen::MatrixXd P;  ///< 4m x 4m, column g supported on group g
    Eigen::VectorXd p;
    Eigen::VectorXd q;
    Eigen::VectorXd u2;
    Eigen::VectorXd c;
    Eigen::VectorXd u1;

    static LogState zero(int m_bar) {
        LogState s;
        const int n = 4 * m_bar;
        s.P = Eigen::MatrixXd::Zero(n, n);
        s.p = Eigen::VectorXd::Zero(n);
        s.q = Eigen::VectorXd::Zero(n);
        s.u2 = Eigen::VectorXd::Zero(n);
        s.c = Eigen::VectorXd::Zero(n);
        s.u1 = Eigen::VectorXd::Zero(n);
        return s;
    }
};

/// Coefficient-side state: current estimate A, its stability copy Z and the
/// corresponding scaled dual U3 (all 2 x 2*m_bar).
struct AdmmState {
    Eigen::MatrixXd A;
    Eigen::MatrixXd Z;
    Eigen::MatrixXd U3;
};

/// One closed-form coefficient update
///   A = [rho3 (Z - U3) + rho1 unflatten(c - u1) + Y H^T]
///       [H H^T + (rho1 + rho3) I]^{-1}
/// exposed for direct verification; the fit loop uses a cached
/// factorization of the same system.
Eigen::MatrixXd update_A(const LagDesign& design, const AdmmState& state,
                         const LogState& log, const HyperParams& params);

/// Per-block order estimate: within each block, count coordinates whose
/// aggregate latent magnitude (sum of |P| across that row) exceeds
/// zero_tol.  The prefix-group structure makes the support a prefix, so the
/// count equals the deepest active lag.
std::array<int, 4> estimate_orders(const Eigen::MatrixXd& P, int m_bar,
                                   double zero_tol);

/// Fit the coupled model with joint order selection and the stability
/// penalty.  Throws NumericError on divergence (non-finite iterates).
FitResult fit_unrestricted(const LagDesign& design, const HyperParams& params);

/// Fit the channel-decoupled model on the block-diagonal design.  Uses
/// lambda_prime / gamma_prime.  Cross-coupling coefficients are forced to
/// play no role by the design and are zeroed in the returned model; orders
/// are reported as (m_yy, 0, 0, m_xx).
FitResult fit_restricted(const RestrictedDesign& design, const HyperParams& params);

}  // namespace vargc
