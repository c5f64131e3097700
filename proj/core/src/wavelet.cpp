#include "vargc/wavelet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "vargc/prox.hpp"

namespace vargc {

namespace {

using Poly = std::vector<double>;  // ascending coefficients

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::complex<double> poly_eval(const Poly& p, std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
    return acc;
}

std::complex<double> poly_eval_deriv(const Poly& p, std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = p.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * p[i];
    return acc;
}

std::vector<std::complex<double>> poly_roots(const Poly& p) {
    const std::size_t deg = p.size() - 1;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -p[i] / p[deg];
    for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
    if (es.info() != Eigen::Success)
        throw NumericError("wavelet filter construction: root finding failed");
    std::vector<std::complex<double>> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) {
        std::complex<double> r = es.eigenvalues()(static_cast<Eigen::Index>(i));
        for (int it = 0; it < 8; ++it) {  // Newton polish to full precision
            const std::complex<double> d = poly_eval_deriv(p, r);
            if (std::abs(d) == 0.0) break;
            r -= poly_eval(p, r) / d;
        }
        roots[i] = r;
    }
    return roots;
}

// Minimum-phase Daubechies scaling filter with `order` vanishing moments.
Eigen::VectorXd build_daubechies(int order) {
    const int N = order;
    // Binomial half-band polynomial P(y) = sum_k C(N-1+k, k) y^k.
    Poly P(N);
    double binom = 1.0;
    for (int k = 0; k < N; ++k) {
        P[k] = binom;
        binom = binom * static_cast<double>(N + k) / static_cast<double>(k + 1);
    }
    // Substitute y*z = (2z - z^2 - 1)/4 and clear denominators:
    // R(z) = sum_k P_k * u(z)^k * z^(N-1-k),  u(z) = (-1 + 2z - z^2)/4.
    const Poly u = {-0.25, 0.5, -0.25};
    Poly R = {0.0};
    Poly u_pow = {1.0};
    for (int k = 0; k < N; ++k) {
        Poly term = u_pow;
        Poly shift(static_cast<std::size_t>(N - 1 - k) + 1, 0.0);
        shift.back() = 1.0;
        term = poly_mul(term, shift);
        if (R.size() < term.size()) R.resize(term.size(), 0.0);
        for (std::size_t i = 0; i < term.size(); ++i) R[i] += P[k] * term[i];
        u_pow = poly_mul(u_pow, u);
    }

    // Spectral factor: roots come in (r, 1/r) pairs off the unit circle;
    // keep the inside ones for the minimum-phase factor.
    std::vector<std::complex<double>> inside;
    if (R.size() > 1) {
        for (const auto& r : poly_roots(R))
            if (std::abs(r) < 1.0) inside.push_back(r);
    }
    if (static_cast<int>(inside.size()) != N - 1)
        throw NumericError("wavelet filter construction: unexpected root split");

    std::vector<std::complex<double>> q = {1.0};
    for (const auto& r : inside) {
        std::vector<std::complex<double>> next(q.size() + 1, 0.0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            next[i + 1] += q[i];
            next[i] -= q[i] * r;
        }
        q = std::move(next);
    }

    // h(z) = ((1+z)/2)^N * Q(z), rescaled so the taps sum to sqrt(2).
    Poly h = {1.0};
    const Poly half = {0.5, 0.5};
    for (int i = 0; i < N; ++i) h = poly_mul(h, half);
    Poly qre(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) qre[i] = q[i].real();
    h = poly_mul(h, qre);

    Eigen::VectorXd taps = Eigen::Map<Eigen::VectorXd>(h.data(), h.size());
    taps *= std::sqrt(2.0) / taps.sum();
    // Canonical orientation: energy front-loaded (minimum phase).
    if (std::abs(taps(0)) < std::abs(taps(taps.size() - 1)))
        taps = taps.reverse().eval();
    return taps;
}

void check_order(int order) {
    if (order < 2 || order > 10)
        throw InvalidInput("wavelet order must lie in [2, 10]");
}

// Quadrature-mirror highpass taps for a lowpass filter.
Eigen::VectorXd mirror(const Eigen::VectorXd& h) {
    const Eigen::Index L = h.size();
    Eigen::VectorXd g(L);
    for (Eigen::Index k = 0; k < L; ++k)
        g(k) = (k % 2 == 0 ? 1.0 : -1.0) * h(L - 1 - k);
    return g;
}

// One analysis level on a band of even length: s -> (approx, detail).
void analysis_step(const Eigen::VectorXd& s, const Eigen::VectorXd& h,
                   const Eigen::VectorXd& g, Eigen::VectorXd& a, Eigen::VectorXd& d) {
    const Eigen::Index n = s.size();
    const Eigen::Index half = n / 2;
    const Eigen::Index L = h.size();
    a.resize(half);
    d.resize(half);
    for (Eigen::Index j = 0; j < half; ++j) {
        double sa = 0.0, sd = 0.0;
        for (Eigen::Index k = 0; k < L; ++k) {
            const double v = s((2 * j + k) % n);
            sa += h(k) * v;
            sd += g(k) * v;
        }
        a(j) = sa;
        d(j) = sd;
    }
}

// Adjoint of analysis_step; exact inverse because the step is orthogonal.
Eigen::VectorXd synthesis_step(const Eigen::VectorXd& a, const Eigen::VectorXd& d,
                               const Eigen::VectorXd& h, const Eigen::VectorXd& g) {
    const Eigen::Index half = a.size();
    const Eigen::Index n = 2 * half;
    const Eigen::Index L = h.size();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < half; ++j) {
        for (Eigen::Index k = 0; k < L; ++k) {
            const Eigen::Index i = (2 * j + k) % n;
            s(i) += h(k) * a(j) + g(k) * d(j);
        }
    }
    return s;
}

}  // namespace

const Eigen::VectorXd& daubechies_filter(int order) {
    check_order(order);
    static const std::vector<Eigen::VectorXd> table = [] {
        std::vector<Eigen::VectorXd> t;
        for (int n = 2; n <= 10; ++n) t.push_back(build_daubechies(n));
        return t;
    }();
    return table[static_cast<std::size_t>(order - 2)];
}

int auto_levels(Eigen::Index n, int order) {
    check_order(order);
    const Eigen::Index flen = 2 * order;
    if (n < flen)
        throw InvalidInput("signal shorter than the wavelet filter");
    const int depth =
        static_cast<int>(std::floor(std::log2(static_cast<double>(n) / flen)));
    return std::clamp(depth, 1, 4);
}

Eigen::VectorBlock<const Eigen::VectorXd> WaveletCoeffs::approx() const {
    const Eigen::Index len = padded_length() >> levels;
    return coeffs.segment(0, len);
}

Eigen::VectorBlock<const Eigen::VectorXd> WaveletCoeffs::detail(int level) const {
    if (level < 1 || level > levels) throw InvalidInput("detail level out of range");
    // Band d_l occupies [np >> l, np >> (l-1)).
    const Eigen::Index np = padded_length();
    return coeffs.segment(np >> level, np >> level);
}

WaveletCoeffs dwt(const Eigen::VectorXd& signal, int order, int levels) {
    check_order(order);
    if (signal.size() < 2) throw InvalidInput("dwt: signal needs >= 2 samples");
    if (!signal.allFinite()) throw InvalidInput("dwt: non-finite samples");
    const int J = levels == 0 ? auto_levels(signal.size(), order) : levels;
    if (J < 1) throw InvalidInput("dwt: levels must be >= 1");

    const Eigen::Index n = signal.size();
    const Eigen::Index block = Eigen::Index(1) << J;
    const Eigen::Index np = ((n + block - 1) / block) * block;

    WaveletCoeffs out;
    out.levels = J;
    out.order = order;
    out.original_length = n;
    out.pad_length = np - n;
    out.coeffs = Eigen::VectorXd::Zero(np);

    const Eigen::VectorXd& h = daubechies_filter(order);
    const Eigen::VectorXd g = mirror(h);

    Eigen::VectorXd band = Eigen::VectorXd::Zero(np);
    band.head(n) = signal;
    Eigen::Index tail = np;  // details of level l live in [tail - np/2^l, tail)
    for (int level = 1; level <= J; ++level) {
        Eigen::VectorXd a, d;
        analysis_step(band, h, g, a, d);
        tail -= d.size();
        out.coeffs.segment(tail, d.size()) = d;
        band = std::move(a);
    }
    out.coeffs.head(band.size()) = band;
    return out;
}

Eigen::VectorXd idwt(const WaveletCoeffs& coeffs) {
    check_order(coeffs.order);
    const Eigen::Index np = coeffs.padded_length();
    if (coeffs.levels < 1 || coeffs.coeffs.size() != np ||
        np % (Eigen::Index(1) << coeffs.levels) != 0)
        throw InvalidInput("idwt: inconsistent coefficient layout");

    const Eigen::VectorXd& h = daubechies_filter(coeffs.order);
    const Eigen::VectorXd g = mirror(h);

    Eigen::VectorXd band = coeffs.coeffs.head(np >> coeffs.levels);
    for (int level = coeffs.levels; level >= 1; --level) {
        const Eigen::VectorXd d = coeffs.coeffs.segment(np >> level, np >> level);
        band = synthesis_step(band, d, h, g);
    }
    return band.head(coeffs.original_length);
}

Eigen::MatrixXd wavelet_shrink(const Eigen::MatrixXd& M, double t, int order,
                               int levels) {
    if (t < 0) throw InvalidInput("wavelet_shrink: negative threshold");
    Eigen::MatrixXd out(M.rows(), M.cols());
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        WaveletCoeffs w = dwt(M.row(r).transpose(), order, levels);
        w.coeffs = soft_threshold(w.coeffs, t);
        out.row(r) = idwt(w).transpose();
    }
    return out;
}

}  // namespace vargc
