#include "vargc/granger.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "vargc/baselines.hpp"
#include "vargc/design.hpp"
#include "vargc/ss_admm.hpp"
#include "vargc/ssd_admm.hpp"

namespace vargc {

namespace {

// Continued-fraction kernel of the regularized incomplete beta function
// (modified Lentz iteration).
double incbeta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

double reg_incomplete_beta(double a, double b, double x) {
    if (a <= 0 || b <= 0) throw InvalidInput("beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                  std::lgamma(b) + a * std::log(x) +
                                  b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * incbeta_cf(a, b, x) / a;
    return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

DirectionalTest direction_test(int p_full, int p_reduced, double rss_full,
                               double rss_reduced, Eigen::Index t_eff,
                               double confidence) {
    DirectionalTest d;
    d.params_full = p_full;
    d.params_reduced = p_reduced;
    d.rss_full = rss_full;
    d.rss_reduced = rss_reduced;
    d.df_num = p_full - p_reduced;
    d.df_den = t_eff - p_full;
    d.valid = d.df_num >= 1 && d.df_den >= 1 && rss_full > 0.0 &&
              rss_reduced >= rss_full;
    if (d.df_num >= 1 && d.df_den >= 1) {
        d.f_critical = f_critical(confidence, static_cast<double>(d.df_num),
                                  static_cast<double>(d.df_den));
        if (rss_full > 0.0) {
            d.f_stat = ((rss_reduced - rss_full) / d.df_num) /
                       (rss_full / static_cast<double>(d.df_den));
            d.p_value = 1.0 - f_cdf(d.f_stat, static_cast<double>(d.df_num),
                                    static_cast<double>(d.df_den));
        }
    }
    d.significant = d.valid && d.f_stat > d.f_critical;
    return d;
}

}  // namespace

double f_cdf(double f, double d1, double d2) {
    if (d1 <= 0 || d2 <= 0)
        throw InvalidInput("f_cdf: degrees of freedom must be positive");
    if (f <= 0.0) return 0.0;
    const double x = d1 * f / (d1 * f + d2);
    return reg_incomplete_beta(0.5 * d1, 0.5 * d2, x);
}

double f_pdf(double f, double d1, double d2) {
    if (d1 <= 0 || d2 <= 0)
        throw InvalidInput("f_pdf: degrees of freedom must be positive");
    if (f <= 0.0) return 0.0;
    const double log_beta = std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) -
                            std::lgamma(0.5 * (d1 + d2));
    const double log_pdf = 0.5 * d1 * std::log(d1 / d2) +
                           (0.5 * d1 - 1.0) * std::log(f) -
                           0.5 * (d1 + d2) * std::log1p(d1 * f / d2) - log_beta;
    return std::exp(log_pdf);
}

double f_critical(double p, double d1, double d2) {
    if (p <= 0.0 || p >= 1.0)
        throw InvalidInput("f_critical: probability must lie in (0, 1)");
    if (d1 <= 0 || d2 <= 0)
        throw InvalidInput("f_critical: degrees of freedom must be positive");

    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (f_cdf(hi, d1, d2) < p) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2000) throw NumericError("f_critical: bracket failed");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_cdf(mid, d1, d2) < p)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
        const double dens = f_pdf(x, d1, d2);
        if (dens <= 0.0) break;
        const double step = (f_cdf(x, d1, d2) - p) / dens;
        const double next = x - step;
        if (next <= lo || next >= hi) break;
        x = next;
    }
    return x;
}

double gc_statistic(double rss_reduced, double rss_full, int p_full,
                    int p_reduced, Eigen::Index t_eff) {
    if (p_full <= p_reduced)
        throw InvalidInput("gc_statistic: full model must have extra predictors");
    if (t_eff <= p_full)
        throw InvalidInput("gc_statistic: needs t_eff > p_full");
    if (rss_full <= 0.0)
        throw InvalidInput("gc_statistic: rss_full must be positive");
    return ((rss_reduced - rss_full) / (p_full - p_reduced)) /
           (rss_full / static_cast<double>(t_eff - p_full));
}

int predictor_count(const std::array<int, 4>& orders, int channel) {
    if (channel != 0 && channel != 1)
        throw InvalidInput("predictor_count: channel must be 0 or 1");
    return channel == 0 ? orders[0] + orders[1] : orders[2] + orders[3];
}

GcReport make_gc_report(const FitResult& full, const FitResult& reduced,
                        Eigen::Index t_eff, double confidence) {
    if (confidence <= 0.0 || confidence >= 1.0)
        throw InvalidInput("make_gc_report: confidence must lie in (0, 1)");
    GcReport rep;
    rep.t_eff = t_eff;
    rep.confidence = confidence;
    rep.orders_full = full.orders;
    rep.orders_reduced = reduced.orders;
    rep.x_to_y = direction_test(predictor_count(full.orders, 0),
                                predictor_count(reduced.orders, 0), full.rss(0),
                                reduced.rss(0), t_eff, confidence);
    rep.y_to_x = direction_test(predictor_count(full.orders, 1),
                                predictor_count(reduced.orders, 1), full.rss(1),
                                reduced.rss(1), t_eff, confidence);
    return rep;
}

GcReport gc_test(const BivariateSeries& series, GcMethod method, int m_bar,
                 const HyperParams& params, double confidence,
                 int blockwise_order) {
    switch (method) {
        case GcMethod::Direct: {
            const LagDesign full = build_lag_design(series, m_bar);
            const RestrictedDesign reduced = build_restricted_design(series, m_bar);
            return make_gc_report(fit_unrestricted(full, params),
                                  fit_restricted(reduced, params), full.T(),
                                  confidence);
        }
        case GcMethod::Denoise: {
            const LagDesign noisy = build_lag_design(series, m_bar);
            const BivariateSeries clean =
                denoised_series(fit_denoise(noisy, params));
            const LagDesign full = build_lag_design(clean, m_bar);
            const RestrictedDesign reduced = build_restricted_design(clean, m_bar);
            return make_gc_report(fit_unrestricted(full, params),
                                  fit_restricted(reduced, params), full.T(),
                                  confidence);
        }
        case GcMethod::Blockwise:
            return blockwise_gc(series, blockwise_order, confidence, m_bar);
    }
    throw InvalidInput("gc_test: unknown method");
}

GcTrace gc_trace(const BivariateSeries& series, GcMethod method,
                 Eigen::Index window, Eigen::Index stride, int m_bar,
                 const HyperParams& params, double confidence, int n_threads,
                 int blockwise_order) {
    if (stride < 1) throw InvalidInput("gc_trace: stride must be >= 1");
    if (window > series.n_samples() || window < 2 * m_bar + 2)
        throw InvalidInput("gc_trace: window does not fit the series");

    GcTrace trace;
    for (Eigen::Index s = 0; s + window <= series.n_samples(); s += stride)
        trace.starts.push_back(s);
    const std::size_t n_windows = trace.starts.size();
    trace.reports.resize(n_windows);

    int workers = n_threads <= 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : n_threads;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(n_windows)));

    auto run_slice = [&](int first) {
        for (std::size_t i = first; i < n_windows; i += workers)
            trace.reports[i] =
                gc_test(series.window(trace.starts[i], window), method, m_bar,
                        params, confidence, blockwise_order);
    };
    if (workers == 1) {
        run_slice(0);
    } else {
        std::vector<std::future<void>> futures;
        futures.reserve(workers - 1);
        for (int k = 1; k < workers; ++k)
            futures.push_back(std::async(std::launch::async, run_slice, k));
        run_slice(0);
        for (auto& f : futures) f.get();  // re-throws worker exceptions
    }
    return trace;
}

}  // namespace vargc
