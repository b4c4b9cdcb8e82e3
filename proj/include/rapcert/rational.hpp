#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "rapcert/common.hpp"

namespace rapcert {

namespace detail {

// Minimal fixed-width unsigned integer, wide enough to compare p/q against a
// 50-digit decimal truncation of pi without rounding. Little-endian limbs.
struct U256 {
    std::array<std::uint64_t, 4> w{0, 0, 0, 0};

    static U256 from_u64(std::uint64_t v) {
        U256 r;
        r.w[0] = v;
        return r;
    }

    static U256 from_decimal(std::string_view digits) {
        U256 r;
        for (char ch : digits) {
            if (ch < '0' || ch > '9') throw StructuralError("U256: non-digit in decimal literal");
            r = r.mul_u64(10).add(from_u64(static_cast<std::uint64_t>(ch - '0')));
        }
        return r;
    }

    U256 mul_u64(std::uint64_t m) const {
        U256 r;
        unsigned __int128 carry = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 cur = static_cast<unsigned __int128>(w[i]) * m + carry;
            r.w[i] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        if (carry != 0) throw NumericError("U256: multiplication overflow");
        return r;
    }

    U256 add(const U256& o) const {
        U256 r;
        unsigned __int128 carry = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 cur = static_cast<unsigned __int128>(w[i]) + o.w[i] + carry;
            r.w[i] = static_cast<std::uint64_t>(cur);
            carry = cur >> 64;
        }
        if (carry != 0) throw NumericError("U256: addition overflow");
        return r;
    }

    // Requires *this >= o.
    U256 sub(const U256& o) const {
        U256 r;
        unsigned __int128 borrow = 0;
        for (int i = 0; i < 4; ++i) {
            unsigned __int128 need = static_cast<unsigned __int128>(o.w[i]) + borrow;
            unsigned __int128 have = w[i];
            if (have >= need) {
                r.w[i] = static_cast<std::uint64_t>(have - need);
                borrow = 0;
            } else {
                r.w[i] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) + have - need);
                borrow = 1;
            }
        }
        if (borrow != 0) throw NumericError("U256: subtraction underflow");
        return r;
    }

    int cmp(const U256& o) const {
        for (int i = 3; i >= 0; --i) {
            if (w[i] < o.w[i]) return -1;
            if (w[i] > o.w[i]) return 1;
        }
        return 0;
    }
};

// floor(pi * 10^50): "3" followed by the first 50 decimals of pi.
inline const U256& pi_times_1e50() {
    static const U256 v =
        U256::from_decimal("314159265358979323846264338327950288419716939937510");
    return v;
}

inline const U256& pow10_50() {
    static const U256 v = U256::from_decimal("100000000000000000000000000000000000000000000000000");
    return v;
}

}  // namespace detail

// Exact rational number, used to carry the angle phi in radians so the
// irrationality of phi/pi is available symbolically (pi is irrational, so a
// nonzero rational number of radians can never be a rational multiple of pi).
struct Rational {
    long long p = 0;
    long long q = 1;

    Rational() = default;
    Rational(long long num, long long den) : p(num), q(den) {
        if (q == 0) throw DomainError("Rational: zero denominator");
        constexpr long long limit = 4000000000000000000LL;  // keeps negation and gcd safe
        if (p < -limit || p > limit || q < -limit || q > limit)
            throw DomainError("Rational: magnitude beyond supported range");
        if (q < 0) {
            p = -p;
            q = -q;
        }
        long long g = std::gcd(p < 0 ? -p : p, q);
        if (g > 1) {
            p /= g;
            q /= g;
        }
    }

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool is_zero() const { return p == 0; }

    bool operator==(const Rational& o) const { return p == o.p && q == o.q; }

    std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

enum class PiInterval {
    inside,     // 0 < p/q < pi with margin > 1e-40
    outside,    // p/q <= 0 or p/q > pi with margin > 1e-40
    ambiguous,  // within 1e-40 of an endpoint; rejected as undecidable here
};

// Decide 0 < p/q < pi using a 50-digit truncation of pi; values closer than
// 1e-40 to either endpoint are reported ambiguous.
inline PiInterval classify_phi_interval(const Rational& phi) {
    using detail::U256;
    if (phi.p <= 0) return PiInterval::outside;
    const U256 lhs = detail::pow10_50().mul_u64(static_cast<std::uint64_t>(phi.p));
    const U256 rhs = detail::pi_times_1e50().mul_u64(static_cast<std::uint64_t>(phi.q));
    // |p/q - pi| < 1e-40  <=>  |p*10^50 - q*pi*10^50| < q*10^10.  The stored
    // pi value is a floor, off by e in (0,1), so widen the band by q.
    const U256 band =
        U256::from_u64(static_cast<std::uint64_t>(phi.q)).mul_u64(10000000000ULL).add(
            U256::from_u64(static_cast<std::uint64_t>(phi.q)));
    const int c = lhs.cmp(rhs);
    const U256 gap = (c >= 0) ? lhs.sub(rhs) : rhs.sub(lhs);
    if (gap.cmp(band) <= 0) return PiInterval::ambiguous;
    return (c < 0) ? PiInterval::inside : PiInterval::outside;
}

}  // namespace rapcert
