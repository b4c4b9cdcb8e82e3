#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "rapcert/model.hpp"

namespace rapcert {

// The boundary sequence a_k = nu G1^k 1 (the joint density at the all-zero
// grid) and its diagnostics.
struct BoundarySequence {
    std::vector<double> values;          // a_1..a_K
    int K = 0;
    std::optional<double> bound;         // 1 + eps*sqrt(2)/sin(phi/2), counterexample only
    bool overflowed = false;             // iteration stopped on overflow; partial values kept
    bool unbounded_suspected = false;    // log-growth fit exceeded tol::growth
    double growth_slope = 0.0;
};

namespace detail {

// Least-squares slope of log(max(|v_k|, 1e-300)) against k over the second
// half of the sequence.
inline double log_growth_slope(const std::vector<double>& v) {
    const int K = static_cast<int>(v.size());
    if (K < 4) return 0.0;
    const int lo = K / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = lo; k < K; ++k) {
        const double x = static_cast<double>(k + 1);
        const double y = std::log(std::max(std::abs(v[static_cast<std::size_t>(k)]), 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = m * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

}  // namespace detail

inline BoundarySequence boundary_sequence_direct(const RapTriple& t, int K) {
    if (K < 1) throw DomainError("boundary_sequence_direct: K must be >= 1");
    BoundarySequence out;
    out.K = K;
    Vec row = t.nu;
    for (int k = 1; k <= K; ++k) {
        row = row * t.g1;
        const double ak = vec_sum(row);
        if (!std::isfinite(ak) || std::abs(ak) > 1e300) {
            out.overflowed = true;
            break;
        }
        out.values.push_back(ak);
    }
    out.growth_slope = detail::log_growth_slope(out.values);
    out.unbounded_suspected = out.overflowed || out.growth_slope > tol::growth;
    return out;
}

// Boundary-sequence closed form: a_k = 1 + eps * Re[(1 - e^{ik phi}) / (1 - e^{i phi}) * (1+i)],
// with e^{ik phi} accumulated one complex multiply per step.
inline BoundarySequence boundary_sequence_closed(const CounterexampleParams& p, int K) {
    if (K < 1) throw DomainError("boundary_sequence_closed: K must be >= 1");
    BoundarySequence out;
    out.K = K;
    out.bound = 1.0 + p.epsilon * std::numbers::sqrt2 / std::sin(0.5 * p.phi);
    const std::complex<double> w(p.c, p.s);
    const std::complex<double> denom = 1.0 - w;  // |denom| = 2 sin(phi/2) > 0 on (0, pi)
    const std::complex<double> one_i(1.0, 1.0);
    std::complex<double> wk(1.0, 0.0);
    out.values.reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        wk *= w;
        out.values.push_back(1.0 + p.epsilon * (((1.0 - wk) / denom) * one_i).real());
    }
    out.growth_slope = detail::log_growth_slope(out.values);
    out.unbounded_suspected = false;
    return out;
}

// A(z) = z/(1-z) * (1 + eps * (1 - z(c+s)) / (1 - 2 z c + z^2)); poles among
// {1, e^{i phi}, e^{-i phi}}. Survival of the rotation poles is measured by
// the numerator magnitude |1 - e^{+-i phi}(c+s)| there; survival of the pole
// at 1 by |1 + eps (1-c-s)/(2-2c)|.
struct GeneratingFunction {
    CounterexampleParams params;
    std::vector<std::complex<double>> poles;
    double numerator_magnitude_plus = 0.0;   // at z = e^{i phi}
    double numerator_magnitude_minus = 0.0;  // at z = e^{-i phi}
    double pole_one_factor = 0.0;            // at z = 1

    std::complex<double> evaluate(std::complex<double> z) const {
        const std::complex<double> quad = 1.0 - 2.0 * z * params.c + z * z;
        const std::complex<double> corr = params.epsilon * (1.0 - z * (params.c + params.s)) / quad;
        return z / (1.0 - z) * (1.0 + corr);
    }
};

inline GeneratingFunction generating_function(const CounterexampleParams& p,
                                              double tol_cancel = tol::cancel) {
    GeneratingFunction gf;
    gf.params = p;
    const std::complex<double> w(p.c, p.s);
    gf.numerator_magnitude_plus = std::abs(1.0 - w * (p.c + p.s));
    gf.numerator_magnitude_minus = std::abs(1.0 - std::conj(w) * (p.c + p.s));
    gf.pole_one_factor = std::abs(1.0 + p.epsilon * (1.0 - p.c - p.s) / (2.0 - 2.0 * p.c));

    if (p.epsilon > 0.0 &&
        (gf.numerator_magnitude_plus <= tol_cancel || gf.numerator_magnitude_minus <= tol_cancel))
        throw InternalInconsistencyError(
            "generating_function: rotation pole cancelled, which the imaginary-part argument rules out for every phi in (0, pi)");

    gf.poles.push_back({1.0, 0.0});
    if (p.epsilon > 0.0) {
        gf.poles.push_back(w);
        gf.poles.push_back(std::conj(w));
    }
    return gf;
}

// Taylor coefficients of A(z) about 0 by the linear recurrence from the
// denominator (1-z)(1 - 2zc + z^2); coefficient k equals a_k.
inline std::vector<double> series_coefficients(const GeneratingFunction& gf, int K) {
    if (K < 1) throw DomainError("series_coefficients: K must be >= 1");
    const double c = gf.params.c, s = gf.params.s, eps = gf.params.epsilon;
    // A(z) = P(z)/Q(z), P = (1+eps) z - (2c + eps(c+s)) z^2 + z^3,
    // Q = 1 - (1+2c) z + (1+2c) z^2 - z^3.
    const double q1 = 1.0 + 2.0 * c;
    const double q2 = -(1.0 + 2.0 * c);
    const double q3 = 1.0;
    const double p1 = 1.0 + eps;
    const double p2 = -(2.0 * c + eps * (c + s));
    const double p3 = 1.0;

    std::vector<double> a(static_cast<std::size_t>(K) + 1, 0.0);  // a[0] unused
    for (int k = 1; k <= K; ++k) {
        double v = 0;
        if (k == 1) v += p1;
        if (k == 2) v += p2;
        if (k == 3) v += p3;
        if (k >= 2) v += q1 * a[static_cast<std::size_t>(k - 1)];
        if (k >= 3) v += q2 * a[static_cast<std::size_t>(k - 2)];
        if (k >= 4) v += q3 * a[static_cast<std::size_t>(k - 3)];
        a[static_cast<std::size_t>(k)] = v;
    }
    return {a.begin() + 1, a.end()};
}

// W_m = (1,0)(I - R^m + sum_{l<m} R^l) 1_2, the partial sums behind the positivity bound, evaluated
// through the complex identification. |W_m| <= M is the bound the positivity
// argument rests on.
struct RotationPartialSums {
    std::vector<double> values;  // W_1..W_m_max
    double max_abs = 0.0;
    double bound = 0.0;  // M(phi)
};

inline RotationPartialSums rotation_partial_sums(const CounterexampleParams& p, int m_max) {
    if (m_max < 1) throw DomainError("rotation_partial_sums: m_max must be >= 1");
    RotationPartialSums out;
    out.bound = p.m_bound;
    const std::complex<double> w(p.c, p.s);
    const std::complex<double> denom = 1.0 - w;
    const std::complex<double> one_i(1.0, 1.0);
    std::complex<double> wm(1.0, 0.0);
    out.values.reserve(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        wm *= w;
        const std::complex<double> z = 1.0 - wm + (1.0 - wm) / denom;
        const double W = (z * one_i).real();
        out.values.push_back(W);
        out.max_abs = std::max(out.max_abs, std::abs(W));
    }
    if (out.max_abs > out.bound)
        throw InternalInconsistencyError(
            "rotation_partial_sums: |W_m| exceeded M, contradicting the positivity proof");
    return out;
}

}  // namespace rapcert
