#pragma once

#include <complex>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "rapcert/expm.hpp"
#include "rapcert/model.hpp"
#include "rapcert/quadrature.hpp"
#include "rapcert/rng.hpp"

namespace rapcert {

// Interarrival times t_1..t_k with partial sums T_j and total T.
struct TimeGrid {
    std::vector<double> times;
    std::vector<double> partial_sums;  // T_1..T_k (T_0 = 0 implicit)
    double total = 0.0;

    static TimeGrid of(std::vector<double> t) {
        TimeGrid g;
        g.times = std::move(t);
        g.partial_sums.reserve(g.times.size());
        double acc = 0;
        for (double ti : g.times) {
            if (!(ti >= 0.0) || !std::isfinite(ti))
                throw DomainError("TimeGrid: interarrival times must be finite and >= 0");
            acc += ti;
            g.partial_sums.push_back(acc);
        }
        g.total = acc;
        return g;
    }

    int k() const { return static_cast<int>(times.size()); }
};

struct DensityEvaluation {
    enum class Method { direct_product, closed_form };
    double value = 0.0;
    std::optional<double> lower_bound;  // positivity bound exp(-T)(1 - eps(1+M)), counterexample only
    Method method = Method::direct_product;
};

// nu e^{G0 t1} G1 ... e^{G0 tk} G1 1, propagated left to right as row-vector
// times matrix; exponentials are memoised per repeated t within one grid.
inline DensityEvaluation joint_density_direct(const RapTriple& t, const TimeGrid& grid) {
    if (grid.k() < 1) throw DomainError("joint_density_direct: k must be >= 1");
    std::map<double, Matrix> cache;
    Vec row = t.nu;
    for (double ti : grid.times) {
        auto it = cache.find(ti);
        if (it == cache.end()) it = cache.emplace(ti, expm(t.g0, ti)).first;
        row = row * it->second;
        row = row * t.g1;
    }
    DensityEvaluation ev;
    ev.value = vec_sum(row);
    ev.method = DensityEvaluation::Method::direct_product;
    return ev;
}

// Closed form of the counterexample's joint density via the proof recursion
//   v_k = 2 e^{-2 t_k} 1_2,   v_j = e^{-2 t_j} (u e^{-(T - T_j)} + R v_{j+1}),
//   f_k = (1 - eps) e^{-T} + eps * (first component of v_1),
// with the 2-d correction block carried as one complex number (R acts as
// multiplication by e^{i phi}; u = (2 - e^{i phi})(1 + i)).
inline DensityEvaluation joint_density_closed_form(const CounterexampleParams& p,
                                                   const TimeGrid& grid) {
    const int k = grid.k();
    if (k < 1) throw DomainError("joint_density_closed_form: k must be >= 1");
    const std::complex<double> w(p.c, p.s);  // e^{i phi}
    const std::complex<double> one_i(1.0, 1.0);
    const std::complex<double> u = (2.0 - w) * one_i;
    const double total = grid.total;

    std::complex<double> v = 2.0 * std::exp(-2.0 * grid.times[static_cast<std::size_t>(k - 1)]) * one_i;
    for (int j = k - 1; j >= 1; --j) {
        const double tj = grid.times[static_cast<std::size_t>(j - 1)];
        const double tail = total - grid.partial_sums[static_cast<std::size_t>(j - 1)];
        v = std::exp(-2.0 * tj) * (u * std::exp(-tail) + w * v);
    }

    DensityEvaluation ev;
    ev.value = (1.0 - p.epsilon) * std::exp(-total) + p.epsilon * v.real();
    ev.lower_bound = counterexample_lower_bound(p, total);
    ev.method = DensityEvaluation::Method::closed_form;
    return ev;
}

// |integral of f_k over its last argument - f_{k-1}(prefix)|. With an empty
// prefix this is the k = 1 full-mass identity |integral of f_1 - 1|.
inline double marginal_consistency_check(const RapTriple& t, const std::vector<double>& prefix,
                                         double quad_tol = tol::quad) {
    ValidationReport v = validate_rap(t);
    if (!v.passed) throw DomainError("marginal_consistency_check: triple fails RAP validation");

    Vec row = t.nu;
    for (double ti : prefix) {
        if (!(ti >= 0.0)) throw DomainError("marginal_consistency_check: negative prefix time");
        row = row * expm(t.g0, ti);
        row = row * t.g1;
    }
    const double f_prefix = prefix.empty() ? 1.0 : vec_sum(row);

    const Spectrum spec = eigenvalues(t.g0);
    double max_real = -std::numeric_limits<double>::infinity();
    for (const auto& ev : spec.eigenvalues) max_real = std::max(max_real, ev.real());
    const double mu = -max_real;  // slowest decay rate of e^{G0 t}

    const auto integrand = [&](double tk) {
        Vec r = row * expm(t.g0, tk);
        r = r * t.g1;
        return vec_sum(r);
    };
    const QuadratureResult q = integrate_semi_infinite(integrand, mu, quad_tol);
    if (!q.converged)
        throw NumericError("marginal_consistency_check: quadrature did not converge",
                           q.error_estimate);
    return std::abs(q.value - f_prefix);
}

namespace detail {

// Nested adaptive integration of the closed-form density over all k
// variables. Tolerance is split across levels.
inline double full_mass_closed_form(const CounterexampleParams& p, int k, int level,
                                    std::vector<double>& partial, double level_tol) {
    const double t_cut = 40.0;  // G0's slowest rate is 1
    const auto f = [&](double t) {
        partial[static_cast<std::size_t>(level)] = t;
        if (level + 1 == k)
            return joint_density_closed_form(p, TimeGrid::of(partial)).value;
        return full_mass_closed_form(p, k, level + 1, partial, level_tol * 0.5);
    };
    return integrate_adaptive(f, 0.0, t_cut, level_tol).value;
}

}  // namespace detail

// |(k-fold integral of f_k) - 1| for the counterexample.
inline double full_mass_residual(const CounterexampleParams& p, int k, double tol_outer = 3e-9) {
    if (k < 1) throw DomainError("full_mass_residual: k must be >= 1");
    if (k > 4) throw DomainError("full_mass_residual: nested quadrature supported for k <= 4");
    std::vector<double> partial(static_cast<std::size_t>(k), 0.0);
    const double mass = detail::full_mass_closed_form(p, k, 0, partial, tol_outer);
    return std::abs(mass - 1.0);
}

// Random interarrival grid used by the sweeps: each time is 0 with
// probability 0.2, Exp(1) with probability 0.6, Exp(0.1) otherwise, so both
// the t -> 0 boundary (largest oscillatory term) and the deep tail get hit.
inline TimeGrid random_sweep_grid(int k, SplitMix64& rng) {
    std::vector<double> t(static_cast<std::size_t>(k));
    for (double& ti : t) {
        const double u = rng.uniform();
        if (u < 0.2)
            ti = 0.0;
        else if (u < 0.8)
            ti = rng.exponential(1.0);
        else
            ti = rng.exponential(0.1);
    }
    return TimeGrid::of(std::move(t));
}

struct PositivityViolation {
    std::vector<double> grid;
    double value = 0.0;
    double lower_bound = 0.0;
};

struct PositivitySweepReport {
    int k_max = 0;
    int samples_per_k = 0;
    long evaluated = 0;
    double min_ratio = 0.0;  // min over grids of value / lower_bound
    double min_value = 0.0;
    std::uint64_t seed = 0;
    int violations = 0;  // always 0 on return; a violation throws instead
};

// Evaluates closed-form densities on random grids for every k <= k_max and
// asserts the exp(-T)(1 - eps(1+M)) lower bound on each; a single violation would falsify
// the construction, so it throws rather than being tallied.
inline PositivitySweepReport positivity_sweep(const CounterexampleParams& p, int k_max,
                                              int samples_per_k, std::uint64_t seed) {
    if (!(p.epsilon < p.epsilon_max()))
        throw DomainError("positivity_sweep: epsilon >= 1/(M+1), bound not guaranteed");
    if (k_max < 1 || samples_per_k < 1)
        throw DomainError("positivity_sweep: k_max and samples must be >= 1");

    PositivitySweepReport rep;
    rep.k_max = k_max;
    rep.samples_per_k = samples_per_k;
    rep.seed = seed;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.min_value = std::numeric_limits<double>::infinity();

    SplitMix64 rng(seed);
    for (int k = 1; k <= k_max; ++k) {
        for (int s = 0; s < samples_per_k; ++s) {
            const TimeGrid grid = random_sweep_grid(k, rng);
            const DensityEvaluation ev = joint_density_closed_form(p, grid);
            const double lb = *ev.lower_bound;
            if (ev.value < lb) {
                std::ostringstream os;
                os << "positivity_sweep: density " << ev.value << " below bound " << lb
                   << " at k = " << k;
                throw InternalInconsistencyError(os.str());
            }
            rep.min_ratio = std::min(rep.min_ratio, ev.value / lb);
            rep.min_value = std::min(rep.min_value, ev.value);
            ++rep.evaluated;
        }
    }
    return rep;
}

}  // namespace rapcert
