#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include "rapcert/common.hpp"
#include "rapcert/rational.hpp"

namespace rapcert {

struct AngleClass {
    enum class Verdict { rational_multiple_of_two_pi, irrational_up_to_bound };

    double theta = 0.0;  // in (-pi, pi]
    Verdict verdict = Verdict::irrational_up_to_bound;
    long long order = 0;      // h when rational: theta = 2*pi*r/h with gcd(r,h)=1
    long long numerator = 0;  // r (reduced, 0 <= r < h)
    long long best_p = 0;     // best rational approximation of theta/(2*pi) ...
    long long best_q = 1;     // ... with denominator <= q_bound
    double best_error = 0.0;  // |theta/(2*pi) - best_p/best_q|
    long long q_bound = 0;    // the Q the search ran with
    bool symbolic = false;    // verdict carried by the exact-rational-phi argument

    bool is_rational() const { return verdict == Verdict::rational_multiple_of_two_pi; }
};

namespace detail {

struct Convergent {
    long long p;
    long long q;
};

// Continued-fraction convergents of x in [0,1); stops once denominators pass
// the cap (the first convergent beyond it is kept so semiconvergent queries
// know the next level exists).
inline std::vector<Convergent> convergents(double x, long long q_cap) {
    std::vector<Convergent> out;
    long long p_prev = 1, q_prev = 0;  // p_{-1}/q_{-1}
    long long p_cur = 0, q_cur = 1;    // p_0/q_0 with a0 = 0 for x in [0,1)
    out.push_back({p_cur, q_cur});
    double frac = x;
    for (int iter = 0; iter < 64; ++iter) {
        if (frac < 1e-18) break;
        const double inv = 1.0 / frac;
        if (inv > 9.0e18) break;
        long long a = static_cast<long long>(std::floor(inv));
        if (a < 1) a = 1;
        frac = inv - std::floor(inv);
        // saturate so q_next never overflows; a saturated step lands past the
        // cap and ends the walk
        const long long max_a = (4000000000000000000LL - q_prev) / std::max<long long>(q_cur, 1);
        if (a > max_a) {
            a = max_a;
            frac = 0.0;
        }
        if (a < 1) break;
        const long long p_next = a * p_cur + p_prev;
        const long long q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        out.push_back({p_cur, q_cur});
        if (q_cur > q_cap) break;
    }
    return out;
}

}  // namespace detail

// Classify theta as a rational multiple of 2*pi (root-of-unity phase) or not,
// searching denominators h <= max_denominator. The acceptance criterion is
// |theta - 2*pi*r/h| <= tol_angle / h, i.e. ||h * theta/(2*pi)|| <= tol_angle/(2*pi):
// float noise around a true root of unity passes for any plausible h, while a
// generic irrational's best approximations fail it at every denominator.
inline AngleClass classify_angle(double theta, long long max_denominator,
                                 double tol_angle = tol::angle) {
    if (max_denominator < 1) throw DomainError("classify_angle: max_denominator must be >= 1");
    if (max_denominator > 1000000000000000LL)
        throw DomainError("classify_angle: max_denominator beyond double-exact range");
    AngleClass out;
    out.theta = theta;
    out.q_bound = max_denominator;

    const double two_pi = 2.0 * std::numbers::pi;
    double x = theta / two_pi;
    x -= std::floor(x);  // into [0,1)
    const double tau = tol_angle / two_pi;

    const auto convs = detail::convergents(x, max_denominator);

    // Minimal q with ||q*x|| <= tau is always a convergent denominator.
    for (const auto& cv : convs) {
        if (cv.q > max_denominator) break;
        const double err = std::abs(cv.q * x - static_cast<double>(cv.p));
        if (err <= tau) {
            out.verdict = AngleClass::Verdict::rational_multiple_of_two_pi;
            out.order = std::max<long long>(cv.q, 1);
            out.numerator = ((cv.p % out.order) + out.order) % out.order;
            out.best_p = cv.p;
            out.best_q = std::max<long long>(cv.q, 1);
            out.best_error = err / static_cast<double>(out.best_q);
            return out;
        }
    }

    // Irrational up to the bound; report the best approximation with
    // denominator <= Q (a convergent or a semiconvergent). Semiconvergents on
    // one level approach x monotonically, so only the largest one under the
    // cap matters per level.
    out.verdict = AngleClass::Verdict::irrational_up_to_bound;
    long long bp = 0, bq = 1;
    double berr = std::abs(x);
    auto consider = [&](long long p, long long q) {
        if (q < 1 || q > max_denominator) return;
        const double err = std::abs(x - static_cast<double>(p) / static_cast<double>(q));
        if (err < berr) {
            berr = err;
            bp = p;
            bq = q;
        }
    };
    for (std::size_t i = 0; i < convs.size(); ++i) {
        consider(convs[i].p, convs[i].q);
        const long long step_p = convs[i].p, step_q = convs[i].q;
        const long long base_p = (i >= 1) ? convs[i - 1].p : 1;
        const long long base_q = (i >= 1) ? convs[i - 1].q : 0;
        if (step_q <= 0 || step_q > max_denominator) continue;
        long long t = (max_denominator - base_q) / step_q;
        if (i + 1 < convs.size()) {
            const long long a_next = (convs[i + 1].q - base_q) / step_q;
            t = std::min(t, a_next - 1);  // t = a_next is convergent i+1 itself
        }
        if (t >= 1) consider(base_p + t * step_p, base_q + t * step_q);
    }
    out.best_p = bp;
    out.best_q = bq;
    out.best_error = berr;
    return out;
}

// Symbolic upgrade for angles that originate from an exact rational number of
// radians: phi = p/q != 0 rational implies phi/pi is irrational (pi is
// irrational), so e^{i*phi} is not a root of unity for any order, independent
// of any denominator bound.
inline AngleClass classify_rational_radians(const Rational& phi_radians,
                                            long long max_denominator = 1000000,
                                            double tol_angle = tol::angle) {
    if (phi_radians.is_zero())
        throw DomainError("classify_rational_radians: phi = 0 is a trivial rational multiple");
    AngleClass out = classify_angle(phi_radians.value(), max_denominator, tol_angle);
    out.verdict = AngleClass::Verdict::irrational_up_to_bound;
    out.order = 0;
    out.numerator = 0;
    out.symbolic = true;
    return out;
}

}  // namespace rapcert
