#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "rapcert/common.hpp"

namespace rapcert {

namespace detail {

inline constexpr int gl_order = 16;

struct GlRule {
    std::array<double, gl_order> x;  // nodes on [-1, 1]
    std::array<double, gl_order> w;
};

// Gauss-Legendre nodes by Newton iteration on P_n (the usual gauleg scheme).
inline GlRule make_gl_rule() {
    GlRule r{};
    const int n = gl_order;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.x[static_cast<std::size_t>(i)] = -z;
        r.x[static_cast<std::size_t>(n - 1 - i)] = z;
        const double wi = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[static_cast<std::size_t>(i)] = wi;
        r.w[static_cast<std::size_t>(n - 1 - i)] = wi;
    }
    return r;
}

inline const GlRule& gl_rule() {
    static const GlRule r = make_gl_rule();
    return r;
}

}  // namespace detail

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = true;
};

// Hard cap on integrand evaluations per integrate_* call; an unreachable
// tolerance then surfaces as converged = false instead of an exponential
// bisection tree.
inline constexpr long quad_eval_budget = 2000000;

template <class F>
double gauss_legendre(const F& f, double a, double b, long* evals = nullptr) {
    const auto& rule = detail::gl_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < detail::gl_order; ++i)
        s += rule.w[static_cast<std::size_t>(i)] * f(mid + half * rule.x[static_cast<std::size_t>(i)]);
    if (evals) *evals += detail::gl_order;
    return s * half;
}

namespace detail {

template <class F>
void adapt(const F& f, double a, double b, double whole, double tol, int depth, int max_depth,
           QuadratureResult& out) {
    const double mid = 0.5 * (a + b);
    const double left = gauss_legendre(f, a, mid, &out.evaluations);
    const double right = gauss_legendre(f, mid, b, &out.evaluations);
    const double diff = std::abs(left + right - whole);
    if (diff <= tol || depth >= max_depth || out.evaluations > quad_eval_budget) {
        out.value += left + right;
        out.error_estimate += diff;
        if (diff > tol) out.converged = false;
        return;
    }
    adapt(f, a, mid, left, 0.5 * tol, depth + 1, max_depth, out);
    adapt(f, mid, b, right, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace detail

// Adaptive Gauss-Legendre by interval halving to an absolute tolerance.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol = tol::quad,
                                    int max_depth = 32) {
    QuadratureResult out;
    if (a == b) return out;
    const double whole = gauss_legendre(f, a, b, &out.evaluations);
    detail::adapt(f, a, b, whole, abs_tol, 0, max_depth, out);
    return out;
}

// Integral over [0, infinity) of an integrand decaying at least like
// exp(-decay_rate * t): truncated at 40/decay_rate, where the tail of the
// decay envelope is below 1e-12 of its scale.
template <class F>
QuadratureResult integrate_semi_infinite(const F& f, double decay_rate,
                                         double abs_tol = tol::quad, int max_depth = 32) {
    if (!(decay_rate > 0)) throw DomainError("integrate_semi_infinite: decay rate must be positive");
    const double t_cut = 40.0 / decay_rate;
    return integrate_adaptive(f, 0.0, t_cut, abs_tol, max_depth);
}

}  // namespace rapcert
