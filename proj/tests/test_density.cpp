#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rapcert/density.hpp"

using namespace rapcert;

namespace {

RapTriple poisson(double lambda) {
    RapTriple t;
    t.n = 1;
    t.nu = {1.0};
    t.g0 = Matrix{{-lambda}};
    t.g1 = Matrix{{lambda}};
    return t;
}

const CounterexampleParams kDefault = CounterexampleParams::from_rational(Rational(1, 1));

}  // namespace

TEST_CASE("time grid bookkeeping") {
    const TimeGrid g = TimeGrid::of({0.5, 0.25, 1.0});
    CHECK(g.k() == 3);
    CHECK(g.partial_sums[0] == doctest::Approx(0.5));
    CHECK(g.partial_sums[2] == doctest::Approx(1.75));
    CHECK(g.total == doctest::Approx(1.75));
    for (std::size_t i = 1; i < g.partial_sums.size(); ++i)
        CHECK(g.partial_sums[i] >= g.partial_sums[i - 1]);
    CHECK_THROWS_AS(TimeGrid::of({-0.1}), DomainError);
}

TEST_CASE("k = 1 density equals the two-term mixture") {
    const double eps = kDefault.epsilon;
    for (double t : {0.0, 0.3, 1.0, 4.2}) {
        const double expected = (1.0 - eps) * std::exp(-t) + 2.0 * eps * std::exp(-2.0 * t);
        const DensityEvaluation closed = joint_density_closed_form(kDefault, TimeGrid::of({t}));
        CHECK(closed.value == doctest::Approx(expected).epsilon(1e-14));
        const DensityEvaluation direct =
            joint_density_direct(build_counterexample(kDefault), TimeGrid::of({t}));
        CHECK(direct.value == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("poisson joint density is the product of exponentials") {
    const DensityEvaluation ev = joint_density_direct(poisson(2.0), TimeGrid::of({1, 1, 1}));
    CHECK(ev.value == doctest::Approx(8.0 * std::exp(-6.0)).epsilon(1e-13));
}

TEST_CASE("all-zero grid reproduces the boundary sequence") {
    const RapTriple t = build_counterexample(kDefault);
    Vec row = t.nu;
    for (int k = 1; k <= 6; ++k) {
        row = row * t.g1;
        const double ak = vec_sum(row);
        const TimeGrid zeros = TimeGrid::of(std::vector<double>(static_cast<std::size_t>(k), 0.0));
        CHECK(joint_density_direct(t, zeros).value == doctest::Approx(ak).epsilon(1e-13));
        CHECK(joint_density_closed_form(kDefault, zeros).value ==
              doctest::Approx(ak).epsilon(1e-13));
    }
}

TEST_CASE("pi/2 two-step density at the origin is exactly one") {
    const CounterexampleParams p = CounterexampleParams::from_angle(std::numbers::pi / 2, 0.1);
    const DensityEvaluation ev = joint_density_closed_form(p, TimeGrid::of({0.0, 0.0}));
    CHECK(ev.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("closed form equals direct product on random grids") {
    const RapTriple t = build_counterexample(kDefault);
    SplitMix64 rng(1234);
    for (int k = 1; k <= 8; ++k) {
        for (int s = 0; s < 50; ++s) {
            const TimeGrid grid = random_sweep_grid(k, rng);
            const double direct = joint_density_direct(t, grid).value;
            const double closed = joint_density_closed_form(kDefault, grid).value;
            CHECK(std::abs(direct - closed) <= 1e-10 * std::abs(closed));
        }
    }
}

TEST_CASE("positivity lower bound on every random grid") {
    const CounterexampleParams p = CounterexampleParams::from_rational(Rational(1, 1), 0.07);
    SplitMix64 rng(99);
    for (int k = 1; k <= 10; ++k) {
        for (int s = 0; s < 50; ++s) {
            const TimeGrid grid = random_sweep_grid(k, rng);
            const DensityEvaluation ev = joint_density_closed_form(p, grid);
            REQUIRE(ev.lower_bound.has_value());
            CHECK(*ev.lower_bound > 0.0);
            CHECK(ev.value >= *ev.lower_bound);
        }
    }
}

TEST_CASE("epsilon = 0 collapses to the exponential baseline") {
    const CounterexampleParams p = CounterexampleParams::from_rational(Rational(1, 1), 0.0);
    SplitMix64 rng(5);
    for (int k = 1; k <= 5; ++k) {
        const TimeGrid grid = random_sweep_grid(k, rng);
        CHECK(joint_density_closed_form(p, grid).value ==
              doctest::Approx(std::exp(-grid.total)).epsilon(1e-14));
    }
    // the sweep ratio is identically one: density and bound coincide
    const PositivitySweepReport rep = positivity_sweep(p, 5, 50, 8);
    CHECK(rep.min_ratio == 1.0);
    CHECK(rep.min_value > 0.0);
}

TEST_CASE("one-step marginal consistency") {
    const RapTriple t = build_counterexample(kDefault);
    CHECK(marginal_consistency_check(t, {0.7}) <= 1e-8);
    CHECK(marginal_consistency_check(t, {0.0}) <= 1e-8);
    CHECK(marginal_consistency_check(t, {0.7, 1.3}) <= 1e-8);

    // poisson marginals are exact exponential integrals
    CHECK(marginal_consistency_check(poisson(1.5), {0.4}) <= 1e-10);

    // k = 1 full mass via the empty prefix
    CHECK(marginal_consistency_check(t, {}) <= 1e-10);
    CHECK(marginal_consistency_check(poisson(2.0), {}) <= 1e-10);
}

TEST_CASE("nested full mass for small k") {
    CHECK(full_mass_residual(kDefault, 1) <= 1e-9);
    CHECK(full_mass_residual(kDefault, 2) <= 1e-8);
}

TEST_CASE("telescoping reduces full normalisation to k = 1") {
    // each one-step identity holds to 1e-8, so the k-fold mass is within
    // k * 1e-8 of one by iterating them down to the k = 1 base case
    const RapTriple t = build_counterexample(kDefault);
    SplitMix64 rng(314);
    for (int k = 2; k <= 5; ++k) {
        const TimeGrid grid = random_sweep_grid(k - 1, rng);
        double accumulated = 0;
        for (int j = k - 1; j >= 0; --j) {
            const std::vector<double> prefix(grid.times.begin(), grid.times.begin() + j);
            const double r = marginal_consistency_check(t, prefix);
            CHECK(r <= 1e-8);
            accumulated += r;
        }
        CHECK(accumulated <= k * 1e-8);
    }
}

TEST_CASE("positivity sweep runs clean and respects its precondition") {
    const CounterexampleParams p = CounterexampleParams::from_rational(Rational(1, 1), 0.07);
    const PositivitySweepReport rep = positivity_sweep(p, 10, 100, 42);
    CHECK(rep.evaluated == 1000);
    CHECK(rep.min_ratio >= 1.0);
    CHECK(rep.min_value > 0.0);
    CHECK(rep.violations == 0);

    const CounterexampleParams bad = CounterexampleParams::from_rational(Rational(1, 1), 0.2);
    CHECK_THROWS_AS(positivity_sweep(bad, 5, 10, 1), DomainError);
}

TEST_CASE("density is a representation invariant, not a matrix invariant") {
    // similarity transform with S 1 = 1 leaves every joint density unchanged
    const RapTriple t = build_counterexample(kDefault);
    SplitMix64 rng(77);
    Matrix s = Matrix::identity(3);
    for (int i = 0; i < 3; ++i) {
        double rowsum = 0;
        for (int j = 0; j < 2; ++j) {
            const double z = 0.25 * (rng.uniform() - 0.5);
            s(i, j) += z;
            rowsum += z;
        }
        s(i, 2) -= rowsum;  // keep S*1 = 1
    }
    const Lu lu = Lu::factor(s);
    const Matrix s_inv = lu.solve(Matrix::identity(3));

    RapTriple tr;
    tr.n = 3;
    const Vec nu_s = t.nu * s_inv;
    tr.nu = nu_s;
    tr.g0 = s * t.g0 * s_inv;
    tr.g1 = s * t.g1 * s_inv;

    for (int k = 1; k <= 5; ++k) {
        const TimeGrid grid = random_sweep_grid(k, rng);
        const double a = joint_density_direct(t, grid).value;
        const double b = joint_density_direct(tr, grid).value;
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    }
}
