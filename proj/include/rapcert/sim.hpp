#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rapcert/density.hpp"
#include "rapcert/model.hpp"
#include "rapcert/rng.hpp"

namespace rapcert {

struct SamplePath {
    enum class Method { ctmc_jump, sequential_rejection };
    std::vector<double> interarrivals;
    std::uint64_t seed = 0;
    Method method = Method::ctmc_jump;
    long proposals = 0;  // rejection sampler only
    long accepted = 0;
};

// Continuous-time Markov jump simulation of a MAP: exponential holding times
// from the diagonal of G0, internal jumps from its off-diagonal rates,
// arrivals from G1.
inline SamplePath simulate_map(const RapTriple& t, int k, std::uint64_t seed) {
    const MapConstraintReport mc = check_map_constraints(t);  // also validates the RAP
    if (!mc.is_map) throw DomainError("simulate_map: triple violates the Markovian sign constraints");
    if (k < 1) throw DomainError("simulate_map: k must be >= 1");

    SamplePath path;
    path.seed = seed;
    path.method = SamplePath::Method::ctmc_jump;
    path.interarrivals.reserve(static_cast<std::size_t>(k));
    SplitMix64 rng(seed);

    // initial phase from nu
    int state = t.n - 1;
    {
        const double u = rng.uniform();
        double acc = 0;
        for (int i = 0; i < t.n; ++i) {
            acc += t.nu[static_cast<std::size_t>(i)];
            if (u <= acc) {
                state = i;
                break;
            }
        }
    }

    double since_arrival = 0;
    while (static_cast<int>(path.interarrivals.size()) < k) {
        const double rate = -t.g0(state, state);
        if (!(rate > 0))
            throw DomainError("simulate_map: absorbing state " + std::to_string(state) +
                              " has zero total rate");
        since_arrival += rng.exponential(rate);

        double u = rng.uniform() * rate;
        int next = -1;
        bool arrival = false;
        for (int j = 0; j < t.n && next < 0; ++j) {
            if (j == state) continue;
            u -= t.g0(state, j);
            if (u <= 0) next = j;
        }
        for (int j = 0; j < t.n && next < 0; ++j) {
            u -= t.g1(state, j);
            if (u <= 0) {
                next = j;
                arrival = true;
            }
        }
        if (next < 0) {  // rounding leftovers: take the last arrival target with positive rate
            for (int j = t.n - 1; j >= 0; --j)
                if (t.g1(state, j) > 0) {
                    next = j;
                    arrival = true;
                    break;
                }
            if (next < 0)
                for (int j = t.n - 1; j >= 0; --j)
                    if (j != state && t.g0(state, j) > 0) {
                        next = j;
                        break;
                    }
            if (next < 0)
                throw InternalInconsistencyError(
                    "simulate_map: positive exit rate but no transition target");
        }
        if (arrival) {
            path.interarrivals.push_back(since_arrival);
            since_arrival = 0;
        }
        state = next;
    }
    return path;
}

// The renormalised conditional "phase" row of a RAP between arrivals; entries
// may be negative, but they sum to one.
struct OrbitState {
    Vec row;

    double renormalise() {
        const double s = vec_sum(row);
        if (s == 0.0 || !std::isfinite(s))
            throw InternalInconsistencyError("OrbitState: degenerate row normalisation");
        for (double& v : row) v /= s;
        return s;
    }
};

// Sequential density-based sampler for the counterexample. The conditional
// density of the next interarrival given the current row (r0, r1, r2) is
//   g(t) = r0 e^{-t} + 2 (r1 + r2) e^{-2t},
// sampled by rejection against c_env e^{-t} with
//   c_env = r0 + (2 + M) (|r1| + |r2|),
// the per-row version of the rotation-sum telescoping bound. The envelope is
// verified on every draw.
inline SamplePath simulate_rap_sequential(const CounterexampleParams& p, int k,
                                          std::uint64_t seed) {
    if (!(p.epsilon < p.epsilon_max()))
        throw DomainError("simulate_rap_sequential: epsilon >= 1/(M+1)");
    if (k < 1) throw DomainError("simulate_rap_sequential: k must be >= 1");

    SamplePath path;
    path.seed = seed;
    path.method = SamplePath::Method::sequential_rejection;
    path.interarrivals.reserve(static_cast<std::size_t>(k));
    SplitMix64 rng(seed);

    const Matrix g1{{1.0, 0.0, 0.0}, {p.u1, p.c, -p.s}, {p.u2, p.s, p.c}};
    OrbitState orbit{{1.0 - p.epsilon, p.epsilon, 0.0}};

    for (int arrival = 0; arrival < k; ++arrival) {
        const double r0 = orbit.row[0];
        const double corr = orbit.row[1] + orbit.row[2];
        const double corr_norm = std::abs(orbit.row[1]) + std::abs(orbit.row[2]);
        const double c_env = r0 + (2.0 + p.m_bound) * corr_norm;
        if (!(c_env > 0))
            throw InternalInconsistencyError("simulate_rap_sequential: nonpositive envelope");

        double t = 0;
        for (;;) {
            ++path.proposals;
            t = rng.exponential(1.0);
            const double g = r0 * std::exp(-t) + 2.0 * corr * std::exp(-2.0 * t);
            const double env = c_env * std::exp(-t);
            if (g < -1e-15)
                throw InternalInconsistencyError(
                    "simulate_rap_sequential: negative conditional density");
            if (g > env * (1.0 + 1e-12))
                throw InternalInconsistencyError(
                    "simulate_rap_sequential: conditional density exceeded its envelope");
            if (rng.uniform() * env <= g) break;
        }
        ++path.accepted;
        path.interarrivals.push_back(t);

        const double e1 = std::exp(-t), e2 = std::exp(-2.0 * t);
        Vec scaled = {orbit.row[0] * e1, orbit.row[1] * e2, orbit.row[2] * e2};
        orbit.row = scaled * g1;
        orbit.renormalise();
    }
    return path;
}

struct AcceptanceRateReport {
    double mean_acceptance = 0.0;
    long proposals = 0;
    long accepted = 0;
    int trials = 0;
    int k = 0;
    std::uint64_t seed = 0;
};

inline AcceptanceRateReport acceptance_rate_report(const CounterexampleParams& p, int k,
                                                   std::uint64_t seed, int trials) {
    if (trials < 1) throw DomainError("acceptance_rate_report: trials must be >= 1");
    AcceptanceRateReport rep;
    rep.trials = trials;
    rep.k = k;
    rep.seed = seed;
    const SplitMix64 root(seed);
    for (int i = 0; i < trials; ++i) {
        SplitMix64 child = root.split(static_cast<std::uint64_t>(i));
        SamplePath path = simulate_rap_sequential(p, k, child.next());
        rep.proposals += path.proposals;
        rep.accepted += path.accepted;
    }
    rep.mean_acceptance = static_cast<double>(rep.accepted) / static_cast<double>(rep.proposals);
    return rep;
}

// Binned comparison of sampled values against analytically expected bin
// masses; the last cell catches everything past the final edge.
struct HistogramComparison {
    std::vector<double> edges;          // ascending interior edges
    std::vector<double> observed_mass;  // edges.size() + 1 cells
    std::vector<double> expected_mass;
    double sup_diff = 0.0;
    double chi_square = 0.0;
    long n_samples = 0;
};

inline HistogramComparison compare_histogram(const std::vector<double>& samples,
                                             const std::vector<double>& edges,
                                             const std::vector<double>& expected_mass) {
    if (expected_mass.size() != edges.size() + 1)
        throw StructuralError("compare_histogram: expected_mass must have edges.size()+1 cells");
    HistogramComparison h;
    h.edges = edges;
    h.expected_mass = expected_mass;
    h.n_samples = static_cast<long>(samples.size());
    h.observed_mass.assign(edges.size() + 1, 0.0);
    for (double x : samples) {
        std::size_t cell = edges.size();
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (x < edges[i]) {
                cell = i;
                break;
            }
        h.observed_mass[cell] += 1.0;
    }
    for (double& m : h.observed_mass) m /= static_cast<double>(h.n_samples);
    for (std::size_t i = 0; i < h.observed_mass.size(); ++i) {
        h.sup_diff = std::max(h.sup_diff, std::abs(h.observed_mass[i] - h.expected_mass[i]));
        const double expected_count = h.expected_mass[i] * static_cast<double>(h.n_samples);
        if (expected_count > 0) {
            const double observed_count = h.observed_mass[i] * static_cast<double>(h.n_samples);
            const double d = observed_count - expected_count;
            h.chi_square += d * d / expected_count;
        }
    }
    return h;
}

}  // namespace rapcert
