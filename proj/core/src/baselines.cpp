#include "vargc/baselines.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

namespace vargc {

namespace {

// Solve K X = rhs for a symmetric positive semi-definite K, adding a tiny
// ridge (and flagging it) when K is numerically rank deficient.
Eigen::MatrixXd solve_gram(Eigen::MatrixXd K, const Eigen::MatrixXd& rhs,
                           bool* flagged) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(d.minCoeff() > 1e-12 * dmax)) {
        const double tr = K.trace();
        K.diagonal().array() += 1e-10 * (tr > 0 ? tr : 1.0);
        ldlt.compute(K);
        if (ldlt.info() != Eigen::Success)
            throw NumericError("least-squares solve failed even with ridge");
        if (flagged) *flagged = true;
    }
    return ldlt.solve(rhs);
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

}  // namespace

FitResult ols_fit(const LagDesign& design) {
    const int m = design.m_bar;
    if (m < 1 || design.H.rows() != 2 * m || design.Y.cols() != design.H.cols() ||
        design.Y.rows() != 2)
        throw InvalidInput("ols_fit: malformed design");
    FitResult res;
    const Eigen::MatrixXd At =
        solve_gram(design.H * design.H.transpose(),
                   design.H * design.Y.transpose(), &res.ridge_fallback);
    res.coefficients = VarCoefficients(At.transpose(), m);
    res.orders = {m, m, m, m};
    res.rss = channel_rss(design.Y, res.coefficients.A, design.H);
    res.iterations = 1;
    res.converged = true;
    return res;
}

FitResult ols_fit_restricted(const RestrictedDesign& design) {
    const int m = design.m_bar;
    if (m < 1 || design.Hy.rows() != m || design.Hx.rows() != m ||
        design.y.size() != design.Hy.cols() || design.x.size() != design.Hx.cols())
        throw InvalidInput("ols_fit_restricted: malformed design");
    FitResult res;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2 * m);
    A.row(0).head(m) = solve_gram(design.Hy * design.Hy.transpose(),
                                  design.Hy * design.y.transpose(),
                                  &res.ridge_fallback)
                           .transpose();
    A.row(1).tail(m) = solve_gram(design.Hx * design.Hx.transpose(),
                                  design.Hx * design.x.transpose(),
                                  &res.ridge_fallback)
                           .transpose();
    res.coefficients = VarCoefficients(std::move(A), m);
    res.orders = {m, 0, 0, m};
    res.rss = design.rss(res.coefficients);
    res.iterations = 1;
    res.converged = true;
    return res;
}

BicScan bic_order(const BivariateSeries& series, int max_order) {
    if (max_order < 1) throw InvalidInput("bic_order: max_order must be >= 1");
    if (series.n_samples() < 2 * max_order + 2)
        throw InvalidInput("bic_order: series too short for max_order");
    BicScan scan;
    double best = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= max_order; ++m) {
        const LagDesign design = build_lag_design(series, m);
        const FitResult fit = ols_fit(design);
        const double T = static_cast<double>(design.T());
        const Eigen::MatrixXd resid = design.Y - fit.coefficients.A * design.H;
        const double det = (resid * resid.transpose() / T).determinant();
        scan.orders.push_back(m);
        if (!(det > 0.0) || !std::isfinite(det)) {
            scan.scores.push_back(std::numeric_limits<double>::quiet_NaN());
            scan.skipped_any = true;
            continue;
        }
        const double score = T * std::log(det) + 4.0 * m * std::log(T);
        scan.scores.push_back(score);
        if (score < best) {
            best = score;
            scan.selected = m;
        }
    }
    if (scan.selected == 0)
        throw NumericError("bic_order: every candidate order was singular");
    return scan;
}

GcReport blockwise_gc(const BivariateSeries& series, int order, double confidence,
                      int max_order) {
    if (order < 0) throw InvalidInput("blockwise_gc: order must be >= 0");
    if (order == 0) order = bic_order(series, max_order).selected;
    const LagDesign full = build_lag_design(series, order);
    const RestrictedDesign reduced = build_restricted_design(series, order);
    return make_gc_report(ols_fit(full), ols_fit_restricted(reduced), full.T(),
                          confidence);
}

Eigen::VectorXd tv_denoise(const Eigen::VectorXd& signal, double weight) {
    if (weight < 0) throw InvalidInput("tv_denoise: weight must be >= 0");
    const Eigen::Index n = signal.size();
    if (n == 0) throw InvalidInput("tv_denoise: empty signal");
    if (weight == 0.0 || n == 1) return signal;

    // Direct taut-string sweep: maintain the running lower/upper string
    // slopes (vmin/vmax with accumulated slacks umin/umax) over the current
    // segment [k0, k]; flush the segment as soon as a jump is forced.
    Eigen::VectorXd x(n);
    Eigen::Index k = 0, k0 = 0, km = 0, kp = 0;
    double vmin = signal(0) - weight;
    double vmax = signal(0) + weight;
    double umin = weight;
    double umax = -weight;

    for (;;) {
        while (k == n - 1) {  // right boundary
            if (umin < 0.0) {
                do x(k0++) = vmin;
                while (k0 <= km);
                km = k = k0;
                vmin = signal(k);
                umin = weight;
                umax = vmin + weight - vmax;
            } else if (umax > 0.0) {
                do x(k0++) = vmax;
                while (k0 <= kp);
                kp = k = k0;
                vmax = signal(k);
                umax = -weight;
                umin = vmax - weight - vmin;
            } else {
                vmin += umin / static_cast<double>(k - k0 + 1);
                do x(k0++) = vmin;
                while (k0 <= k);
                return x;
            }
        }
        umin += signal(k + 1) - vmin;
        if (umin < -weight) {  // forced downward jump: [k0, km] is settled
            do x(k0++) = vmin;
            while (k0 <= km);
            kp = km = k = k0;
            vmin = signal(k);
            vmax = vmin + 2 * weight;
            umin = weight;
            umax = -weight;
            continue;
        }
        umax += signal(k + 1) - vmax;
        if (umax > weight) {  // forced upward jump: [k0, kp] is settled
            do x(k0++) = vmax;
            while (k0 <= kp);
            kp = km = k = k0;
            vmax = signal(k);
            vmin = vmax - 2 * weight;
            umin = weight;
            umax = -weight;
            continue;
        }
        ++k;
        if (umin >= weight) {
            vmin += (umin - weight) / static_cast<double>(k - k0 + 1);
            umin = weight;
            km = k;
        }
        if (umax <= -weight) {
            vmax += (umax + weight) / static_cast<double>(k - k0 + 1);
            umax = -weight;
            kp = k;
        }
    }
}

BivariateSeries tv_denoise(const BivariateSeries& series, double weight) {
    return BivariateSeries(tv_denoise(series.y, weight),
                           tv_denoise(series.x, weight), series.sample_rate);
}

double suggest_tv_weight(const Eigen::VectorXd& signal) {
    const Eigen::Index n = signal.size();
    if (n < 3) throw InvalidInput("suggest_tv_weight: needs at least 3 samples");
    std::vector<double> d(static_cast<std::size_t>(n - 1));
    for (Eigen::Index i = 0; i + 1 < n; ++i) d[i] = signal(i + 1) - signal(i);
    const double med = median_of(d);
    for (double& v : d) v = std::abs(v - med);
    // 1.4826 * MAD estimates the noise sd of the differences; dividing by
    // sqrt(2) converts to per-sample sd.
    const double sigma = 1.4826 * median_of(std::move(d)) / std::sqrt(2.0);
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

double tv_weight_by_validation(const BivariateSeries& series, int m_bar,
                               double holdout_fraction) {
    series.validate();
    if (m_bar < 1) throw InvalidInput("tv_weight_by_validation: m_bar must be >= 1");
    if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
        throw InvalidInput("tv_weight_by_validation: holdout fraction in (0, 1)");
    const Eigen::Index n = series.n_samples();
    const Eigen::Index split =
        n - static_cast<Eigen::Index>(holdout_fraction * static_cast<double>(n));
    if (split <= 2 * m_bar + 4 || split >= n)
        throw InvalidInput("tv_weight_by_validation: series too short to split");

    const double base =
        0.5 * (suggest_tv_weight(series.y) + suggest_tv_weight(series.x));
    const double candidates[] = {0.0, 0.25 * base, 0.5 * base, base, 2.0 * base};

    double best_w = 0.0;
    double best_err = std::numeric_limits<double>::infinity();
    for (const double w : candidates) {
        const BivariateSeries den = tv_denoise(series, w);
        BivariateSeries head;
        head.y = den.y.head(split);
        head.x = den.x.head(split);
        const FitResult fit = ols_fit(build_lag_design(head, m_bar));
        // Score on the raw tail: denoised regressors, observed targets.
        const LagDesign full = build_lag_design(den, m_bar);
        double err = 0.0;
        for (Eigen::Index t = split - m_bar; t < full.Y.cols(); ++t) {
            const Eigen::Vector2d pred = fit.coefficients.A * full.H.col(t);
            err += (series.y(t + m_bar) - pred(0)) * (series.y(t + m_bar) - pred(0));
            err += (series.x(t + m_bar) - pred(1)) * (series.x(t + m_bar) - pred(1));
        }
        // Strictly-better guard with a relative tie margin, so equal scores
        // keep the smaller weight.  Written multiplicatively: the first
        // comparison is against infinity, where a subtractive margin would
        // produce NaN and reject every candidate.
        if (err < best_err * (1.0 - 1e-12)) {
            best_err = err;
            best_w = w;
        }
    }
    return best_w;
}

}  // namespace vargc
