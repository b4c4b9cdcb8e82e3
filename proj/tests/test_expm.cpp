#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rapcert/expm.hpp"
#include "rapcert/rng.hpp"

using namespace rapcert;

TEST_CASE("diagonal fast path is exact") {
    const Matrix g0 = Matrix::diagonal({-1, -2, -2});
    const Matrix e = expm(g0, std::log(2.0));
    CHECK(e(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e(2, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e(0, 1) == 0.0);
}

TEST_CASE("t = 0 gives the identity") {
    const Matrix a{{0.3, -1.2}, {4.5, 0.7}};
    const Matrix e = expm(a, 0.0);
    CHECK((e - Matrix::identity(2)).max_abs() <= 1e-15);
}

TEST_CASE("rotation generator exponentiates to the rotation") {
    const double phi = 1.0;
    const Matrix gen{{0, -phi}, {phi, 0}};
    const Matrix r = expm(gen, 1.0);
    CHECK(r(0, 0) == doctest::Approx(std::cos(phi)).epsilon(1e-13));
    CHECK(r(0, 1) == doctest::Approx(-std::sin(phi)).epsilon(1e-13));
    CHECK(r(1, 0) == doctest::Approx(std::sin(phi)).epsilon(1e-13));
    CHECK(r(1, 1) == doctest::Approx(std::cos(phi)).epsilon(1e-13));
}

TEST_CASE("nilpotent block") {
    const Matrix n{{0, 1}, {0, 0}};
    const Matrix e = expm(n, 3.0);
    CHECK(e(0, 0) == doctest::Approx(1.0));
    CHECK(e(0, 1) == doctest::Approx(3.0));
    CHECK(e(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("semigroup property on random stable matrices") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = 2.0 * rng.uniform() - 1.0;
        a -= Matrix::identity(n) * (a.inf_norm() + 0.5);
        const double t = 2.0 * rng.uniform();
        const double u = 2.0 * rng.uniform();
        const Matrix lhs = expm(a, t + u);
        const Matrix rhs = expm(a, t) * expm(a, u);
        CHECK((lhs - rhs).frobenius_norm() <= 1e-10);
    }
}

TEST_CASE("agrees with a scaled Taylor evaluation") {
    SplitMix64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = 3.0 * (rng.uniform() - 0.5);

        // independent route: 30-term Taylor series of exp(a / 2^10), squared back up
        Matrix small = a * std::ldexp(1.0, -10);
        Matrix term = Matrix::identity(n);
        Matrix taylor = Matrix::identity(n);
        for (int k = 1; k <= 30; ++k) {
            term = term * small;
            term *= 1.0 / k;
            taylor += term;
        }
        for (int k = 0; k < 10; ++k) taylor = taylor * taylor;

        const Matrix pade = expm(a, 1.0);
        CHECK((pade - taylor).frobenius_norm() <= 1e-11 * (1.0 + taylor.frobenius_norm()));
    }
}

TEST_CASE("large norm goes through scaling and squaring") {
    const Matrix a{{-30.0, 25.0}, {2.0, -40.0}};
    const Matrix e1 = expm(a, 1.0);
    const Matrix e2 = expm(a, 0.5) * expm(a, 0.5);
    CHECK((e1 - e2).frobenius_norm() <= 1e-12 * (1.0 + e1.frobenius_norm()));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(expm(Matrix(2, 3)), StructuralError);
    CHECK_THROWS_AS(expm(Matrix::identity(2), -1.0), DomainError);
    Matrix bad = Matrix::identity(2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(expm(bad, 1.0), DomainError);
}
