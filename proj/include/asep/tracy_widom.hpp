#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "error.hpp"

namespace asep {

// Ai on [-15, 15]: Maclaurin series in long double on [-10, 6] (the largest term stays below
// ~1e8 there, so cancellation costs at most ~1e-11), the large-|x| asymptotic series elsewhere.
inline double airy_ai(double x) {
    require(x >= -15.0 && x <= 15.0, ErrorKind::unsupported_range, "airy_ai supports [-15, 15]");
    const long double pi = 3.141592653589793238462643383279502884L;
    if (x < -10.0) {
        const long double z = -x;
        const long double zeta = 2.0L / 3.0L * z * std::sqrt(z);
        long double u = 1, p = 1, r = 0, prev = 1;
        for (int k = 1; k < 60; ++k) {
            u *= (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) / ((2.0L * k - 1) * 216.0L * k) / zeta;
            if (std::fabs(u) > std::fabs(prev)) break;
            const long double sign = (k / 2) % 2 ? -1 : 1;
            (k % 2 ? r : p) += sign * u;
            prev = u;
            if (std::fabs(u) < 1e-22L) break;
        }
        const long double phase = zeta - pi / 4;
        return static_cast<double>((std::cos(phase) * p + std::sin(phase) * r) / (std::sqrt(pi) * std::pow(z, 0.25L)));
    }
    if (x <= 6.0) {
        const long double c1 = 0.355028053887817239260063186004183176L;
        const long double c2 = 0.258819403792806798405183560189203963L;
        const long double z = x, z3 = z * z * z;
        long double f = 1, g = z, tf = 1, tg = z;
        for (int k = 1; k < 200; ++k) {
            tf *= z3 / ((3.0L * k - 1) * (3.0L * k));
            tg *= z3 / ((3.0L * k) * (3.0L * k + 1));
            f += tf;
            g += tg;
            if (std::fabs(tf) < 1e-24L && std::fabs(tg) < 1e-24L) break;
        }
        return static_cast<double>(c1 * f - c2 * g);
    }
    const long double z = x;
    const long double zeta = 2.0L / 3.0L * z * std::sqrt(z);
    long double u = 1, sum = 1, prev = 1;
    for (int k = 1; k < 60; ++k) {
        u *= (6.0L * k - 5) * (6.0L * k - 3) * (6.0L * k - 1) / ((2.0L * k - 1) * 216.0L * k) / zeta;
        if (std::fabs(u) > std::fabs(prev)) break;
        sum += (k % 2 ? -u : u);
        prev = u;
        if (std::fabs(u) < 1e-20L) break;
    }
    return static_cast<double>(std::exp(-zeta) / (2 * std::sqrt(pi) * std::pow(z, 0.25L)) * sum);
}

namespace detail {

inline constexpr std::array<double, 4> kGaussX{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                               0.8611363115940526};
inline constexpr std::array<double, 4> kGaussW{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                               0.3478548451374538};

// Tridiagonal solve a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i.
inline std::vector<double> thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                  std::vector<double> d) {
    const size_t n = b.size();
    for (size_t i = 1; i < n; ++i) {
        double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        d[i] -= m * d[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = d[n - 1] / b[n - 1];
    for (size_t i = n - 1; i-- > 0;) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
    return x;
}

} // namespace detail

struct HMSolution {
    double s_min = 0, s_max = 0, h = 0;
    std::vector<double> x, q, dq;
    double max_residual = 0; // 6th-order finite-difference residual of q'' = 2q^3 + xq
    int newton_iterations = 0;

    // cubic Hermite interpolation
    double value(double s) const {
        require(s >= s_min && s <= s_max, ErrorKind::unsupported_range, "outside the solved range");
        size_t j = std::min(static_cast<size_t>((s - s_min) / h), x.size() - 2);
        const double t = (s - x[j]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        return h00 * q[j] + h10 * h * dq[j] + h01 * q[j + 1] + h11 * h * dq[j + 1];
    }
};

// left asymptote of the Hastings-McLeod solution
inline double hm_left_asymptote(double x) {
    const double x3 = x * x * x;
    return std::sqrt(-x / 2) * (1 + 1 / (8 * x3) - 73 / (128 * x3 * x3) + 10657 / (1024 * x3 * x3 * x3));
}

// Painleve II q'' = 2q^3 + xq as a boundary-value problem: Numerov discretization, damped Newton,
// q(s_min) from the left asymptote and q(s_max) = Ai(s_max).
inline HMSolution hastings_mcleod(double s_min = -12.0, double s_max = 8.0, int intervals = 8000) {
    require(s_min >= -12.0 && s_max <= 8.0 && s_min < s_max, ErrorKind::unsupported_range,
            "hastings_mcleod needs -12 <= s_min < s_max <= 8");
    require(s_min <= -6.0, ErrorKind::unsupported_range, "left boundary must lie in the asymptotic regime (<= -6)");
    require(intervals >= 100, ErrorKind::invalid_input, "too few mesh intervals");
    HMSolution sol;
    sol.s_min = s_min;
    sol.s_max = s_max;
    const int n = intervals;
    const double h = (s_max - s_min) / n;
    sol.h = h;
    sol.x.resize(n + 1);
    sol.q.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = s_min + j * h;
        sol.x[j] = x;
        const double ai = x >= -15 ? airy_ai(x) : 0.0;
        sol.q[j] = std::sqrt(std::max(-x / 2, 0.0) + ai * ai);
    }
    sol.q[0] = hm_left_asymptote(s_min);
    sol.q[n] = airy_ai(s_max);
    auto& q = sol.q;
    const auto& X = sol.x;
    const double h2 = h * h / 12;
    auto f = [&](int j) { return 2 * q[j] * q[j] * q[j] + X[j] * q[j]; };
    auto fp = [&](int j) { return 6 * q[j] * q[j] + X[j]; };
    auto residual = [&](std::vector<double>& F) {
        double norm = 0;
        F.assign(n - 1, 0);
        for (int j = 1; j < n; ++j) {
            F[j - 1] = q[j + 1] - 2 * q[j] + q[j - 1] - h2 * (f(j + 1) + 10 * f(j) + f(j - 1));
            norm = std::max(norm, std::fabs(F[j - 1]));
        }
        return norm;
    };
    std::vector<double> F;
    double norm = residual(F);
    int it = 0;
    for (; it < 100 && norm > 1e-15; ++it) {
        std::vector<double> a(n - 1), b(n - 1), c(n - 1);
        for (int j = 1; j < n; ++j) {
            a[j - 1] = 1 - h2 * fp(j - 1);
            b[j - 1] = -2 - 10 * h2 * fp(j);
            c[j - 1] = 1 - h2 * fp(j + 1);
        }
        for (auto& v : F) v = -v;
        std::vector<double> dx = detail::thomas(a, b, c, F);
        std::vector<double> base(q.begin() + 1, q.end() - 1);
        double step = 1;
        double next = norm;
        for (int tries = 0; tries < 30; ++tries, step /= 2) {
            for (int j = 1; j < n; ++j) q[j] = base[j - 1] + step * dx[j - 1];
            next = residual(F);
            if (next < norm || next < 1e-15) break;
        }
        if (next >= norm && next >= 1e-15) {
            if (norm < 1e-12) break; // converged to round-off
            fail(ErrorKind::numerical_failure,
                 "Hastings-McLeod Newton iteration stalled at residual " + std::to_string(norm));
        }
        norm = next;
    }
    if (norm > 1e-12)
        fail(ErrorKind::numerical_failure, "Hastings-McLeod Newton iteration did not converge, residual " +
                                               std::to_string(norm) + " after " + std::to_string(it) + " steps");
    sol.newton_iterations = it;
    for (int j = 0; j <= n; ++j)
        if (!(q[j] > 0)) fail(ErrorKind::numerical_failure, "Hastings-McLeod solution not positive on the mesh");

    sol.dq.assign(n + 1, 0);
    for (int j = 0; j <= n; ++j) {
        if (j >= 3 && j <= n - 3) {
            sol.dq[j] = (-q[j - 3] + 9 * q[j - 2] - 45 * q[j - 1] + 45 * q[j + 1] - 9 * q[j + 2] + q[j + 3]) / (60 * h);
        } else if (j < 3) {
            sol.dq[j] = (-25 * q[j] + 48 * q[j + 1] - 36 * q[j + 2] + 16 * q[j + 3] - 3 * q[j + 4]) / (12 * h);
        } else {
            sol.dq[j] = (25 * q[j] - 48 * q[j - 1] + 36 * q[j - 2] - 16 * q[j - 3] + 3 * q[j - 4]) / (12 * h);
        }
    }
    double res = 0;
    for (int j = 3; j <= n - 3; ++j) {
        const double d2 = (2 * q[j - 3] - 27 * q[j - 2] + 270 * q[j - 1] - 490 * q[j] + 270 * q[j + 1] -
                           27 * q[j + 2] + 2 * q[j + 3]) /
                          (180 * h * h);
        res = std::max(res, std::fabs(d2 - f(j)));
    }
    sol.max_residual = res;
    return sol;
}

// F_GOE(s) = exp(-1/2 int_s^inf [q(x) + (x-s) q(x)^2] dx) with q the Hastings-McLeod solution.
class GoeDistribution {
public:
    static const GoeDistribution& instance() {
        static const GoeDistribution d;
        return d;
    }

    explicit GoeDistribution(HMSolution sol) : hm_(std::move(sol)) { build(); }
    GoeDistribution() : GoeDistribution(hastings_mcleod()) {}

    const HMSolution& hm() const { return hm_; }

    // supported range [-10, 6]
    double cdf(double s) const {
        require(s >= -10.0 && s <= 6.0, ErrorKind::unsupported_range, "f_goe supports [-10, 6]");
        return std::exp(-exponent(s));
    }

    // Beyond the supported range: the mesh value down to s_min and 0 below; above s_max the
    // right tail 1 - F(s) ~ 1/2 int_s^inf Ai.
    double cdf_clamped(double s) const {
        if (s < hm_.s_min) return 0.0;
        if (s <= hm_.s_max) return std::exp(-exponent(s));
        const double zeta = 2.0 / 3.0 * s * std::sqrt(s);
        const double tail = std::exp(-zeta) / (2 * std::sqrt(M_PI) * std::pow(s, 0.75));
        return 1 - 0.5 * tail;
    }

    double quantile(double p) const {
        require(p > 0 && p < 1, ErrorKind::invalid_input, "quantile needs p in (0,1)");
        double lo = hm_.s_min, hi = 12.0;
        for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
            double mid = 0.5 * (lo + hi);
            (cdf_clamped(mid) < p ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // exponent 1/2 int_s^inf [q + (x-s) q^2], s in [s_min, s_max]
    double exponent(double s) const {
        const auto& X = hm_.x;
        size_t j = std::min(static_cast<size_t>((s - hm_.s_min) / hm_.h), X.size() - 2);
        // integrals over [s, x_{j+1}] by Gauss-Legendre on the Hermite interpolant
        double i0 = 0, i1 = 0, i2 = 0;
        const double a = s, b = X[j + 1];
        if (b > a) {
            for (int g = 0; g < 4; ++g) {
                const double x = 0.5 * (a + b) + 0.5 * (b - a) * detail::kGaussX[g];
                const double w = 0.5 * (b - a) * detail::kGaussW[g];
                const double v = hm_.value(std::min(x, hm_.s_max));
                i0 += w * v;
                i1 += w * v * v;
                i2 += w * x * v * v;
            }
        }
        i0 += c0_[j + 1] + tail0_;
        i1 += c1_[j + 1] + tail1_;
        i2 += c2_[j + 1] + tail2_;
        return 0.5 * (i0 + i2 - s * i1);
    }

private:
    void build() {
        const auto& X = hm_.x;
        const size_t n = X.size();
        c0_.assign(n, 0);
        c1_.assign(n, 0);
        c2_.assign(n, 0);
        for (size_t j = n - 1; j-- > 0;) {
            double i0 = 0, i1 = 0, i2 = 0;
            for (int g = 0; g < 4; ++g) {
                const double x = 0.5 * (X[j] + X[j + 1]) + 0.5 * hm_.h * detail::kGaussX[g];
                const double w = 0.5 * hm_.h * detail::kGaussW[g];
                const double v = hm_.value(x);
                i0 += w * v;
                i1 += w * v * v;
                i2 += w * x * v * v;
            }
            c0_[j] = c0_[j + 1] + i0;
            c1_[j] = c1_[j + 1] + i1;
            c2_[j] = c2_[j + 1] + i2;
        }
        // q ~ Ai beyond s_max; Ai is below 1e-16 past 15
        const double a = hm_.s_max, b = 15.0;
        const int panels = 400;
        const double ph = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            for (int g = 0; g < 4; ++g) {
                const double x = a + (p + 0.5) * ph + 0.5 * ph * detail::kGaussX[g];
                const double w = 0.5 * ph * detail::kGaussW[g];
                const double v = airy_ai(x);
                tail0_ += w * v;
                tail1_ += w * v * v;
                tail2_ += w * x * v * v;
            }
        }
    }

    HMSolution hm_;
    std::vector<double> c0_, c1_, c2_; // integrals from node j to s_max
    double tail0_ = 0, tail1_ = 0, tail2_ = 0;
};

inline double f_goe(double s) { return GoeDistribution::instance().cdf(s); }

inline double f_goe_inverse(double p) { return GoeDistribution::instance().quantile(p); }

struct GoeMoments {
    double mean = 0;
    double variance = 0;
    double mass = 0; // F(b) - F(a)
};

// moments of F_GOE restricted to [a, b] by integration by parts and composite Simpson
inline GoeMoments goe_moments(double a = -10.0, double b = 8.0, int panels = 3600) {
    const auto& d = GoeDistribution::instance();
    const double h = (b - a) / panels;
    double i0 = 0, i1 = 0;
    for (int i = 0; i <= panels; ++i) {
        const double s = a + i * h;
        const double w = (i == 0 || i == panels) ? 1 : (i % 2 ? 4 : 2);
        const double F = d.cdf_clamped(s);
        i0 += w * F;
        i1 += w * s * F;
    }
    i0 *= h / 3;
    i1 *= h / 3;
    const double Fa = d.cdf_clamped(a), Fb = d.cdf_clamped(b);
    GoeMoments m;
    m.mass = Fb - Fa;
    const double e1 = b * Fb - a * Fa - i0;
    const double e2 = b * b * Fb - a * a * Fa - 2 * i1;
    m.mean = e1 / m.mass;
    m.variance = e2 / m.mass - m.mean * m.mean;
    return m;
}

} // namespace asep
