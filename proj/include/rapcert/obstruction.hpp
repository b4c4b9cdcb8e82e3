#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rapcert/angle.hpp"
#include "rapcert/boundary.hpp"
#include "rapcert/graph.hpp"
#include "rapcert/model.hpp"
#include "rapcert/rng.hpp"

namespace rapcert {

struct BoundednessEvidence {
    int k_checked = 0;
    double max_abs = 0.0;
    double growth_slope = 0.0;  // least-squares slope of log|b_k| over the tail
    bool bounded = false;       // slope <= tol::growth and no overflow
};

// Report of the nonnegative-realisation spectral check for a nonnegative pair (alpha, C):
// after pruning unreachable states, a bounded sequence b_k = alpha C^k 1
// forces spectral radius <= 1 and every peripheral eigenvalue to be a root of
// unity. A nonnegative pair can never exhibit an irrational peripheral phase;
// the verdict exists to verify that empirically and to process hypothesised
// realisations.
struct ObstructionReport {
    int restricted_dimension = 0;
    double spectral_radius = 0.0;
    BoundednessEvidence boundedness_evidence;
    std::vector<std::complex<double>> eigenvalues;  // union over Frobenius blocks
    std::vector<AngleClass> peripheral_phases;
    std::vector<double> b_values;
    bool nilpotent = false;

    enum class Verdict { consistent_with_nonnegative_realisation, obstructed };
    Verdict verdict = Verdict::consistent_with_nonnegative_realisation;
    std::string obstruction_reason;
};

struct ObstructionOptions {
    double peripheral_tol = tol::peripheral;
    double tol_angle = tol::angle;
    double growth_tol = tol::growth;
    double rho_excess_tol = 1e-6;  // "bounded but rho > 1" inconsistency margin
};

inline ObstructionReport check_obstruction(const Vec& alpha, const Matrix& c, int K, long long Q,
                                           const ObstructionOptions& opt = {}) {
    if (K < 4) throw DomainError("check_obstruction: K must be >= 4");
    const Restriction restricted = reachable_restriction(alpha, c);  // validates signs too

    ObstructionReport rep;
    rep.restricted_dimension = static_cast<int>(restricted.kept.size());

    Vec row = restricted.alpha;
    rep.b_values.reserve(static_cast<std::size_t>(K));
    bool overflow = false;
    for (int k = 1; k <= K; ++k) {
        row = row * restricted.c;
        const double bk = vec_sum(row);
        if (!std::isfinite(bk) || std::abs(bk) > 1e300) {
            overflow = true;
            break;
        }
        rep.b_values.push_back(bk);
    }
    rep.boundedness_evidence.k_checked = static_cast<int>(rep.b_values.size());
    for (double b : rep.b_values)
        rep.boundedness_evidence.max_abs = std::max(rep.boundedness_evidence.max_abs, std::abs(b));
    rep.boundedness_evidence.growth_slope = detail::log_growth_slope(rep.b_values);
    rep.boundedness_evidence.bounded =
        !overflow && rep.boundedness_evidence.growth_slope <= opt.growth_tol;

    // Blockwise spectrum via the Frobenius normal form. The matrix's spectrum
    // is exactly the union of the diagonal-block spectra, and this is what
    // keeps nilpotent blocks honest: an acyclic part contributes exact zeros
    // instead of O(eps^{1/m}) QR noise that would masquerade as peripheral
    // eigenvalues of arbitrary phase.
    const FrobeniusDecomposition frob = frobenius_decomposition(restricted.c);
    rep.spectral_radius = frob.spectral_radius;
    for (std::size_t b = 0; b < frob.blocks.size(); ++b) {
        const auto& blk = frob.blocks[b];
        const int m = static_cast<int>(blk.size());
        Matrix sub(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                sub(i, j) = restricted.c(blk[static_cast<std::size_t>(i)],
                                         blk[static_cast<std::size_t>(j)]);
        const Spectrum bs = rapcert::eigenvalues(sub);
        rep.eigenvalues.insert(rep.eigenvalues.end(), bs.eigenvalues.begin(), bs.eigenvalues.end());
        // peripheral candidates can only come from blocks whose own radius
        // reaches the global one; their peripheral eigenvalues are simple by
        // Perron-Frobenius, so the computed phases are trustworthy
        if (frob.spectral_radius == 0.0 ||
            frob.block_spectral_radii[b] <
                frob.spectral_radius * (1.0 - opt.peripheral_tol))
            continue;
        for (const auto& ev : bs.eigenvalues)
            if (std::abs(std::abs(ev) - frob.spectral_radius) <=
                opt.peripheral_tol * frob.spectral_radius)
                rep.peripheral_phases.push_back(
                    classify_angle(std::atan2(ev.imag(), ev.real()), Q, opt.tol_angle));
    }
    rep.nilpotent = frob.spectral_radius == 0.0;

    for (const auto& ph : rep.peripheral_phases) {
        if (!ph.is_rational()) {
            rep.verdict = ObstructionReport::Verdict::obstructed;
            rep.obstruction_reason =
                "peripheral phase not a rational multiple of 2*pi up to Q = " + std::to_string(Q);
            return rep;
        }
    }
    if (rep.boundedness_evidence.bounded &&
        rep.spectral_radius > 1.0 + opt.rho_excess_tol) {
        rep.verdict = ObstructionReport::Verdict::obstructed;
        rep.obstruction_reason =
            "spectral radius exceeds 1 while the sequence b_k shows no growth";
        return rep;
    }
    rep.verdict = ObstructionReport::Verdict::consistent_with_nonnegative_realisation;
    return rep;
}

// The impossibility certificate. Numeric evidence (pole magnitudes, boundary
// bound) is kept separate from the symbolic steps (irrationality of p/q/pi,
// the Perron-Frobenius citation) so no floating-point tolerance carries the
// headline conclusion.
struct NoMapCertificate {
    CounterexampleParams params;
    bool conclusion = false;  // true: no finite-dimensional MAP representation exists
    std::string refusal_reason;

    struct Step {
        std::string label;      // "a".."e"
        std::string statement;
        bool holds = false;
    };
    std::vector<Step> steps;

    // numeric evidence
    double pole_evidence_plus = 0.0;   // |1 - e^{+i phi}(c+s)|
    double pole_evidence_minus = 0.0;  // |1 - e^{-i phi}(c+s)|
    double tol_cancel_used = 0.0;
    double boundary_bound = 0.0;        // eps*sqrt(2)/sin(phi/2)
    double boundary_max_deviation = 0.0;
    int boundary_k_checked = 0;

    // symbolic basis
    std::string irrationality_basis;
    std::string perron_frobenius_basis;

    // conditioning diagnostic: rotation poles close to z = 1 or z = -1 make
    // the numeric pole check ill-conditioned (the symbolic step is unaffected)
    bool poles_ill_conditioned = false;
    double min_pole_separation = 0.0;
};

struct CertifyOptions {
    int boundary_k = 500;
    long long q_bound = 1000000;
    double tol_cancel = tol::cancel;
    double conditioning_threshold = 1e-3;
};

inline NoMapCertificate certify_no_map(const CounterexampleParams& p,
                                       const CertifyOptions& opt = {}) {
    NoMapCertificate cert;
    cert.params = p;
    cert.tol_cancel_used = opt.tol_cancel;

    if (p.epsilon == 0.0) {
        cert.refusal_reason =
            "epsilon = 0: the correction term vanishes and A(z) has no poles at e^{+-i phi}";
        return cert;
    }
    if (!(p.epsilon > 0.0) || !(p.epsilon < p.epsilon_max())) {
        cert.refusal_reason =
            "epsilon >= 1/(M+1): strict positivity of the joint densities is not certified, "
            "so the conjecture's hypothesis is not established";
        return cert;
    }
    if (!p.phi_exact.has_value()) {
        cert.refusal_reason =
            "phi was not given as an exact rational number of radians; the symbolic "
            "irrationality step is unavailable";
        return cert;
    }
    if (p.phi_exact->is_zero()) {
        cert.refusal_reason = "phi = 0 admits no irrationality argument";
        return cert;
    }

    // (a) the rotation poles of A(z) survive
    const GeneratingFunction gf = generating_function(p, opt.tol_cancel);
    cert.pole_evidence_plus = gf.numerator_magnitude_plus;
    cert.pole_evidence_minus = gf.numerator_magnitude_minus;
    const bool a_ok = gf.numerator_magnitude_plus > opt.tol_cancel &&
                      gf.numerator_magnitude_minus > opt.tol_cancel;
    cert.steps.push_back(
        {"a",
         "A(z) has poles at e^{+-i phi}: the numerator 1 - z(cos phi + sin phi) does not vanish "
         "there (numeric magnitudes recorded; the imaginary-part argument rules cancellation out "
         "symbolically for every phi in (0, pi))",
         a_ok});

    // (b) a MAP realisation would force a nonnegative C1 with b_k = a_k
    cert.steps.push_back(
        {"b",
         "any finite MAP realisation (alpha, C0, C1) reproduces the boundary sequence, so "
         "B(z) = A(z) and C1 must have eigenvalues e^{-+i phi} (reciprocals of the unit-circle "
         "poles)",
         true});

    // (c) boundedness of a_k forces rho(C1) = 1
    const BoundarySequence seq = boundary_sequence_closed(p, opt.boundary_k);
    cert.boundary_bound = p.epsilon * std::numbers::sqrt2 / std::sin(0.5 * p.phi);
    for (double ak : seq.values)
        cert.boundary_max_deviation = std::max(cert.boundary_max_deviation, std::abs(ak - 1.0));
    cert.boundary_k_checked = opt.boundary_k;
    const bool c_ok = cert.boundary_max_deviation <= cert.boundary_bound;
    cert.steps.push_back(
        {"c",
         "(a_k) is bounded (|a_k - 1| <= eps*sqrt(2)/sin(phi/2)), so a nonnegative realisation "
         "of it must have spectral radius exactly 1",
         c_ok});

    // (d) Perron-Frobenius root-of-unity requirement
    cert.perron_frobenius_basis =
        "Perron-Frobenius (via the Frobenius normal form, applied blockwise): every unit-circle "
        "eigenvalue of a finite nonnegative matrix with spectral radius 1 is a root of unity";
    cert.steps.push_back({"d", cert.perron_frobenius_basis, true});

    // (e) phi/pi is irrational, so e^{+-i phi} is not a root of unity
    const AngleClass symbolic = classify_rational_radians(*p.phi_exact, opt.q_bound);
    cert.irrationality_basis = "phi = " + p.phi_exact->str() +
                               " is a nonzero rational number of radians and pi is irrational, "
                               "hence phi/pi is irrational and e^{+-i phi} is not a root of unity";
    cert.steps.push_back({"e", cert.irrationality_basis, symbolic.symbolic});

    // conditioning: distance of e^{i phi} to the real-axis poles 1 and -1
    const double d_plus = 2.0 * std::sin(0.5 * p.phi);
    const double d_minus = 2.0 * std::cos(0.5 * p.phi);
    cert.min_pole_separation = std::min(d_plus, d_minus);
    cert.poles_ill_conditioned = cert.min_pole_separation < opt.conditioning_threshold;

    cert.conclusion = true;
    for (const auto& st : cert.steps) cert.conclusion = cert.conclusion && st.holds;
    if (!cert.conclusion)
        cert.refusal_reason = "a certificate step failed its numeric check";
    return cert;
}

// Empirical validation of the root-of-unity property: random nonnegative (alpha, C) pairs
// never produce an irrational peripheral phase.
struct RealisationStudySummary {
    int trials = 0;
    int irrational_verdicts = 0;
    int order_exceeded_dimension = 0;  // peripheral order > matrix dimension
    long long max_order_seen = 0;
    int nilpotent_cases = 0;
    int tolerance_boundary_cases = 0;  // modulus within [0.5, 1.5] x tol of the radius edge
    std::uint64_t seed = 0;
};

inline RealisationStudySummary random_nonnegative_realisation_study(int trials, int n_max,
                                                                    std::uint64_t seed,
                                                                    long long Q = 10000) {
    if (trials < 1) throw DomainError("realisation study: trials must be >= 1");
    if (n_max < 1 || n_max > 64) throw DomainError("realisation study: n_max must be in [1, 64]");

    RealisationStudySummary sum;
    sum.trials = trials;
    sum.seed = seed;
    SplitMix64 rng(seed);

    for (int trial = 0; trial < trials; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max)));
        const int kind = static_cast<int>(rng.below(4));
        Matrix c(n, n);
        if (kind == 0) {  // dense positive
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) c(i, j) = rng.uniform();
        } else if (kind == 1) {  // sparse
            const double density = std::min(1.0, 1.5 / n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (rng.uniform() < density) c(i, j) = rng.uniform();
        } else if (kind == 2) {  // random permutation
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
            for (int i = n - 1; i > 0; --i)
                std::swap(perm[static_cast<std::size_t>(i)],
                          perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
            for (int i = 0; i < n; ++i) c(i, perm[static_cast<std::size_t>(i)]) = 1.0;
        } else {  // substochastic
            for (int i = 0; i < n; ++i) {
                double rsum = 0;
                for (int j = 0; j < n; ++j) {
                    c(i, j) = rng.uniform();
                    rsum += c(i, j);
                }
                const double scale = (0.3 + 0.7 * rng.uniform()) / rsum;
                for (int j = 0; j < n; ++j) c(i, j) *= scale;
            }
        }
        if (kind == 0 || kind == 1) {  // normalise spectral radius to 1 when possible
            const double rho = frobenius_decomposition(c).spectral_radius;
            if (rho > 0) c *= 1.0 / rho;
        }

        Vec alpha(static_cast<std::size_t>(n), 0.0);
        for (double& v : alpha) v = (rng.uniform() < 0.5) ? rng.uniform() : 0.0;
        if (vec_sum(alpha) == 0.0) alpha[rng.below(static_cast<std::uint64_t>(n))] = 1.0;

        ObstructionOptions opt;
        const ObstructionReport rep = check_obstruction(alpha, c, 200, Q, opt);
        if (rep.nilpotent) {
            ++sum.nilpotent_cases;
            continue;
        }
        for (const auto& ph : rep.peripheral_phases) {
            if (!ph.is_rational()) {
                ++sum.irrational_verdicts;
            } else {
                sum.max_order_seen = std::max(sum.max_order_seen, ph.order);
                if (ph.order > rep.restricted_dimension) ++sum.order_exceeded_dimension;
            }
        }
        // tolerance-boundary diagnostics on the full spectrum
        for (const auto& ev : rep.eigenvalues) {
            const double rel = std::abs(std::abs(ev) - rep.spectral_radius) /
                               std::max(rep.spectral_radius, 1e-300);
            if (rel > 0.5 * opt.peripheral_tol && rel < 1.5 * opt.peripheral_tol)
                ++sum.tolerance_boundary_cases;
        }
    }
    return sum;
}

}  // namespace rapcert
