#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rapcert/eigen.hpp"
#include "rapcert/matrix.hpp"
#include "rapcert/rational.hpp"

namespace rapcert {

// A rational arrival process representation (nu, G0, G1) of order n. Real,
// possibly signed entries; the Markovian sign constraints are a separate,
// stricter check.
struct RapTriple {
    int n = 0;
    Vec nu;     // initial distribution, row vector
    Matrix g0;  // transition-rate part, 1/time
    Matrix g1;  // arrival part, 1/time
};

struct ValidationCheck {
    std::string name;
    double residual = 0.0;
    bool passed = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool passed = false;
};

namespace detail {

inline void check_triple_shape(const RapTriple& t) {
    if (t.n <= 0) throw StructuralError("RapTriple: n must be positive");
    if (static_cast<int>(t.nu.size()) != t.n)
        throw StructuralError("RapTriple: nu has length " + std::to_string(t.nu.size()) +
                              ", expected n = " + std::to_string(t.n));
    if (t.g0.rows() != t.n || t.g0.cols() != t.n)
        throw StructuralError("RapTriple: g0 is not n x n");
    if (t.g1.rows() != t.n || t.g1.cols() != t.n)
        throw StructuralError("RapTriple: g1 is not n x n");
    if (!t.g0.all_finite() || !t.g1.all_finite())
        throw StructuralError("RapTriple: non-finite matrix entries");
    for (double v : t.nu)
        if (!std::isfinite(v)) throw StructuralError("RapTriple: non-finite nu entries");
}

}  // namespace detail

// Every RapTriple invariant with its numeric residual: nu sums to one, the
// conservation identity (G0+G1)1 = 0, and the stability of G0 (all eigenvalue
// real parts strictly negative, so e^{G0 t} 1 -> 0).
inline ValidationReport validate_rap(const RapTriple& t, double tol_exact = tol::exact) {
    detail::check_triple_shape(t);
    ValidationReport rep;

    const double nu_residual = std::abs(vec_sum(t.nu) - 1.0);
    rep.checks.push_back({"nu_sums_to_one", nu_residual, nu_residual <= tol_exact});

    const Vec conserv = row_sums(t.g0 + t.g1);
    double conserv_residual = 0;
    for (double v : conserv) conserv_residual = std::max(conserv_residual, std::abs(v));
    rep.checks.push_back({"conservation_g0_plus_g1", conserv_residual, conserv_residual <= tol_exact});

    const Spectrum spec = eigenvalues(t.g0);
    double max_real = -std::numeric_limits<double>::infinity();
    for (const auto& ev : spec.eigenvalues) max_real = std::max(max_real, ev.real());
    rep.checks.push_back({"g0_spectrum_strictly_stable", max_real, max_real < 0.0});

    rep.passed = true;
    for (const auto& c : rep.checks) rep.passed = rep.passed && c.passed;
    return rep;
}

// The usual Markovian sign constraints, entrywise and exact (tolerance zero).
struct MapConstraintReport {
    bool nu_nonnegative = false;
    bool g1_nonnegative = false;
    bool g0_offdiag_nonnegative = false;
    bool g0_rowsums_nonpositive = false;
    bool is_map = false;
};

inline MapConstraintReport check_map_constraints(const RapTriple& t) {
    const ValidationReport v = validate_rap(t);
    if (!v.passed) throw DomainError("check_map_constraints: triple fails RAP validation");
    MapConstraintReport r;
    r.nu_nonnegative = true;
    for (double x : t.nu) r.nu_nonnegative = r.nu_nonnegative && (x >= 0.0);
    r.g1_nonnegative = true;
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j) r.g1_nonnegative = r.g1_nonnegative && (t.g1(i, j) >= 0.0);
    r.g0_offdiag_nonnegative = true;
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.n; ++j)
            if (i != j) r.g0_offdiag_nonnegative = r.g0_offdiag_nonnegative && (t.g0(i, j) >= 0.0);
    r.g0_rowsums_nonpositive = true;
    for (double s : row_sums(t.g0)) r.g0_rowsums_nonpositive = r.g0_rowsums_nonpositive && (s <= 0.0);
    r.is_map = r.nu_nonnegative && r.g1_nonnegative && r.g0_offdiag_nonnegative &&
               r.g0_rowsums_nonpositive;
    return r;
}

// Parameters of the order-3 counterexample construction. phi is carried as a
// double everywhere the numerics need it; when it originates from an exact
// rational number of radians the Rational rides along and powers the symbolic
// irrationality step of the certificate.
struct CounterexampleParams {
    double phi = 1.0;
    std::optional<Rational> phi_exact;
    double epsilon = 0.0;

    double c = 0.0;       // cos phi
    double s = 0.0;       // sin phi
    double u1 = 0.0;      // 2 - c + s
    double u2 = 0.0;      // 2 - c - s
    double m_bound = 0.0; // M(phi) = sqrt(2) * (2 + 1/sin(phi/2))

    bool positivity_guaranteed = false;  // 0 < eps < 1/(M+1)

    double epsilon_max() const { return 1.0 / (m_bound + 1.0); }

    // phi carried as a nonzero exact rational makes phi/pi irrational outright
    bool phi_certified_irrational() const {
        return phi_exact.has_value() && !phi_exact->is_zero();
    }

    static CounterexampleParams from_rational(const Rational& phi,
                                              std::optional<double> eps = std::nullopt) {
        switch (classify_phi_interval(phi)) {
            case PiInterval::inside:
                break;
            case PiInterval::outside:
                throw DomainError("phi = " + phi.str() + " is outside (0, pi)");
            case PiInterval::ambiguous:
                throw DomainError("phi = " + phi.str() +
                                  " is within 1e-40 of an endpoint of (0, pi); rejected as ambiguous");
        }
        CounterexampleParams p = from_angle(phi.value(), eps);
        p.phi_exact = phi;
        return p;
    }

    // Formula-testing path: phi given directly in radians (e.g. pi/2). No
    // symbolic certificate is available through here.
    static CounterexampleParams from_angle(double phi, std::optional<double> eps = std::nullopt) {
        if (!(phi > 0.0) || !(phi < std::numbers::pi))
            throw DomainError("phi must lie in (0, pi)");
        CounterexampleParams p;
        p.phi = phi;
        p.c = std::cos(phi);
        p.s = std::sin(phi);
        p.u1 = 2.0 - p.c + p.s;
        p.u2 = 2.0 - p.c - p.s;
        p.m_bound = std::numbers::sqrt2 * (2.0 + 1.0 / std::sin(0.5 * phi));
        // default: half of the guaranteed-positivity bound
        p.epsilon = eps.value_or(0.5 / (p.m_bound + 1.0));
        if (!(p.epsilon >= 0.0) || !(p.epsilon < 1.0))
            throw DomainError("epsilon must lie in [0, 1)");
        p.positivity_guaranteed = p.epsilon > 0.0 && p.epsilon < p.epsilon_max();
        return p;
    }
};

// Positivity margin 1 - eps*(1+M); the joint densities are bounded below by
// exp(-T) times this, so strict positivity holds on the whole family iff it
// is positive.
inline double positivity_margin(const CounterexampleParams& p) {
    return 1.0 - p.epsilon * (1.0 + p.m_bound);
}

inline double counterexample_lower_bound(const CounterexampleParams& p, double total_time) {
    return std::exp(-total_time) * positivity_margin(p);
}

// G0 = diag(-1,-2,-2), G1 = [[1,0,0],[u1,c,-s],[u2,s,c]], nu = (1-eps, eps, 0).
inline RapTriple build_counterexample(const CounterexampleParams& p) {
    if (!(p.epsilon > 0.0) || !(p.epsilon < 1.0))
        throw DomainError("build_counterexample: epsilon must lie in (0, 1)");
    RapTriple t;
    t.n = 3;
    t.nu = {1.0 - p.epsilon, p.epsilon, 0.0};
    t.g0 = Matrix::diagonal({-1.0, -2.0, -2.0});
    t.g1 = Matrix{{1.0, 0.0, 0.0}, {p.u1, p.c, -p.s}, {p.u2, p.s, p.c}};
    return t;
}

inline RapTriple build_counterexample(const Rational& phi, std::optional<double> eps = std::nullopt) {
    return build_counterexample(CounterexampleParams::from_rational(phi, eps));
}

}  // namespace rapcert
