#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rapcert/boundary.hpp"

using namespace rapcert;

namespace {
const CounterexampleParams kDefault = CounterexampleParams::from_rational(Rational(1, 1));
}

TEST_CASE("first terms match the hand-expanded products") {
    const double eps = 0.1;
    const CounterexampleParams p = CounterexampleParams::from_rational(Rational(1, 1), eps);
    const RapTriple t = build_counterexample(p);

    const BoundarySequence direct = boundary_sequence_direct(t, 4);
    const BoundarySequence closed = boundary_sequence_closed(p, 4);

    CHECK(direct.values[0] == doctest::Approx(1.0 + eps).epsilon(1e-14));
    CHECK(closed.values[0] == doctest::Approx(1.0 + eps).epsilon(1e-14));

    // a_2 = 1 + eps (1 + c - s), and the explicit 3x3 product agrees
    const double expected_a2 = 1.0 + eps * (1.0 + p.c - p.s);
    CHECK(closed.values[1] == doctest::Approx(expected_a2).epsilon(1e-14));
    const Vec row2 = (t.nu * t.g1) * t.g1;
    CHECK(vec_sum(row2) == doctest::Approx(expected_a2).epsilon(1e-14));
}

TEST_CASE("direct and closed forms agree to 1e-11 up to K = 500") {
    const RapTriple t = build_counterexample(kDefault);
    const BoundarySequence direct = boundary_sequence_direct(t, 500);
    const BoundarySequence closed = boundary_sequence_closed(kDefault, 500);
    REQUIRE(direct.values.size() == 500);
    REQUIRE(closed.values.size() == 500);
    double worst = 0;
    for (std::size_t i = 0; i < 500; ++i)
        worst = std::max(worst, std::abs(direct.values[i] - closed.values[i]));
    CHECK(worst <= 1e-11);
    CHECK_FALSE(direct.overflowed);
    CHECK_FALSE(direct.unbounded_suspected);
}

TEST_CASE("boundary values stay positive and within the closed-form band") {
    const BoundarySequence closed = boundary_sequence_closed(kDefault, 500);
    const double band = kDefault.epsilon * std::numbers::sqrt2 / std::sin(0.5);
    for (double ak : closed.values) {
        CHECK(ak > 0.0);
        CHECK(std::abs(ak - 1.0) <= band);
    }
    CHECK(*closed.bound == doctest::Approx(1.0 + band));
}

TEST_CASE("pi/2 rotation cycles with period four") {
    const double eps = 0.1;
    const CounterexampleParams p = CounterexampleParams::from_angle(std::numbers::pi / 2, eps);
    const BoundarySequence seq = boundary_sequence_closed(p, 12);
    CHECK(seq.values[0] == doctest::Approx(1.0 + eps).epsilon(1e-13));  // 1 + eps
    CHECK(seq.values[1] == doctest::Approx(1.0).epsilon(1e-13));        // 1 + eps(1 + c - s)
    CHECK(seq.values[2] == doctest::Approx(1.0 - eps).epsilon(1e-13));
    CHECK(seq.values[3] == doctest::Approx(1.0).epsilon(1e-13));  // geometric sum over {1,i,-1,-i}
    for (int k = 0; k + 4 < 12; ++k)
        CHECK(seq.values[static_cast<std::size_t>(k)] ==
              doctest::Approx(seq.values[static_cast<std::size_t>(k + 4)]).epsilon(1e-12));
}

TEST_CASE("unbounded sequences are flagged") {
    RapTriple poisson;
    poisson.n = 1;
    poisson.nu = {1.0};
    poisson.g0 = Matrix{{-2.0}};
    poisson.g1 = Matrix{{2.0}};
    const BoundarySequence seq = boundary_sequence_direct(poisson, 60);
    REQUIRE(seq.values.size() == 60);
    CHECK(seq.values[9] == doctest::Approx(1024.0));
    CHECK(seq.unbounded_suspected);
    CHECK(seq.growth_slope == doctest::Approx(std::log(2.0)).epsilon(1e-6));

    // overflow keeps partials
    const BoundarySequence big = boundary_sequence_direct(poisson, 1200);
    CHECK(big.overflowed);
    CHECK(big.values.size() < 1200);
    CHECK(big.unbounded_suspected);
}

TEST_CASE("generating function values and poles") {
    // A(0) = 0
    const GeneratingFunction gf = generating_function(kDefault);
    CHECK(std::abs(gf.evaluate({0.0, 0.0})) == 0.0);

    // phi = pi/2: A(1/2) = 1 + 0.4 eps
    const CounterexampleParams p = CounterexampleParams::from_angle(std::numbers::pi / 2, 0.3);
    const GeneratingFunction gfq = generating_function(p);
    CHECK(gfq.evaluate({0.5, 0.0}).real() == doctest::Approx(1.0 + 0.4 * 0.3).epsilon(1e-14));
    CHECK(std::abs(gfq.evaluate({0.5, 0.0}).imag()) <= 1e-15);

    // partial sums of a_k z^k agree with the rational evaluation
    const BoundarySequence seq = boundary_sequence_closed(p, 60);
    std::complex<double> acc{0, 0};
    double zk = 1.0;
    for (int kk = 1; kk <= 60; ++kk) {
        zk *= 0.5;
        acc += seq.values[static_cast<std::size_t>(kk - 1)] * zk;
    }
    CHECK(acc.real() == doctest::Approx(gfq.evaluate({0.5, 0.0}).real()).epsilon(1e-13));

    // pole set {1, e^{i phi}, e^{-i phi}} for eps > 0
    REQUIRE(gf.poles.size() == 3);
    CHECK(gf.poles[0] == std::complex<double>(1.0, 0.0));
    CHECK(gf.poles[1].real() == doctest::Approx(kDefault.c));
    CHECK(gf.poles[1].imag() == doctest::Approx(kDefault.s));
    CHECK(gf.poles[2].imag() == doctest::Approx(-kDefault.s));
    CHECK(gf.numerator_magnitude_plus > 0.1);
    CHECK(gf.numerator_magnitude_minus > 0.1);

    // eps = 0: only the pole at 1 remains
    const GeneratingFunction flat =
        generating_function(CounterexampleParams::from_rational(Rational(1, 1), 0.0));
    CHECK(flat.poles.size() == 1);
}

TEST_CASE("series coefficients reproduce the boundary sequence") {
    const GeneratingFunction gf = generating_function(kDefault);
    const std::vector<double> coeffs = series_coefficients(gf, 200);
    const BoundarySequence seq = boundary_sequence_closed(kDefault, 200);
    double worst = 0;
    for (std::size_t i = 0; i < 200; ++i)
        worst = std::max(worst, std::abs(coeffs[i] - seq.values[i]));
    CHECK(worst <= 1e-10);
    CHECK(coeffs[0] == doctest::Approx(1.0 + kDefault.epsilon).epsilon(1e-14));

    // eps = 0 gives the all-ones sequence (A = z/(1-z))
    const GeneratingFunction flat =
        generating_function(CounterexampleParams::from_rational(Rational(1, 1), 0.0));
    for (double c : series_coefficients(flat, 30)) CHECK(c == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("pole numerator magnitude is positive across the whole angle range") {
    double min_mag = 1e300;
    const int n = 10000;
    for (int i = 1; i <= n; ++i) {
        const double phi = std::numbers::pi * static_cast<double>(i) / (n + 1);
        const std::complex<double> w(std::cos(phi), std::sin(phi));
        const double mag = std::abs(1.0 - w * (std::cos(phi) + std::sin(phi)));
        min_mag = std::min(min_mag, mag);
    }
    CHECK(min_mag > 1e-12);
    CHECK(min_mag > 1e-4);  // the tightest values sit at the interval ends
}

TEST_CASE("rotation partial sums: first value, bound, periodicity") {
    const RotationPartialSums w1 = rotation_partial_sums(kDefault, 1);
    CHECK(w1.values[0] == doctest::Approx(2.0 - kDefault.c + kDefault.s).epsilon(1e-14));

    const RotationPartialSums w = rotation_partial_sums(kDefault, 10000);
    CHECK(w.max_abs <= kDefault.m_bound);
    CHECK(w.bound == doctest::Approx(5.778237).epsilon(1e-6));

    const CounterexampleParams pq = CounterexampleParams::from_angle(std::numbers::pi / 2, 0.1);
    const RotationPartialSums wq = rotation_partial_sums(pq, 16);
    for (int m = 0; m + 4 < 16; ++m)
        CHECK(wq.values[static_cast<std::size_t>(m)] ==
              doctest::Approx(wq.values[static_cast<std::size_t>(m + 4)]).epsilon(1e-12));
}

TEST_CASE("no repeating cycle in the normalised deviations (irrationality evidence)") {
    const BoundarySequence seq = boundary_sequence_closed(kDefault, 500);
    std::vector<double> dev(seq.values.size());
    for (std::size_t i = 0; i < seq.values.size(); ++i)
        dev[i] = (seq.values[i] - 1.0) / kDefault.epsilon;
    for (int period = 1; period <= 250; ++period) {
        bool all_match = true;
        for (std::size_t k = 0; k + static_cast<std::size_t>(period) < dev.size(); ++k) {
            if (std::abs(dev[k + static_cast<std::size_t>(period)] - dev[k]) > 1e-9) {
                all_match = false;
                break;
            }
        }
        CHECK_FALSE(all_match);
    }
}
