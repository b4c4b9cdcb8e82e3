#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rapcert/quadrature.hpp"
#include "rapcert/sim.hpp"

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

RapTriple erlang2() {
    RapTriple t;
    t.n = 2;
    t.nu = {1.0, 0.0};
    t.g0 = Matrix{{-1.0, 1.0}, {0.0, -1.0}};
    t.g1 = Matrix{{0.0, 0.0}, {1.0, 0.0}};
    return t;
}

struct Moments {
    double mean = 0, var = 0, se_mean = 0;
    long n = 0;
};

Moments summarize(const std::vector<double>& xs) {
    Moments m;
    m.n = static_cast<long>(xs.size());
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(m.n - 1);
    m.se_mean = std::sqrt(m.var / static_cast<double>(m.n));
    return m;
}

const CounterexampleParams kDefault = CounterexampleParams::from_rational(Rational(1, 1));

}  // namespace

TEST_CASE("fixed seeds reproduce identical paths") {
    const SamplePath a = simulate_map(poisson(2.0), 50, 777);
    const SamplePath b = simulate_map(poisson(2.0), 50, 777);
    CHECK(a.interarrivals == b.interarrivals);

    const SamplePath c = simulate_rap_sequential(kDefault, 50, 777);
    const SamplePath d = simulate_rap_sequential(kDefault, 50, 777);
    CHECK(c.interarrivals == d.interarrivals);
    CHECK(c.interarrivals != a.interarrivals);
}

TEST_CASE("every interarrival is strictly positive and finite") {
    const SamplePath a = simulate_map(erlang2(), 2000, 5);
    for (double t : a.interarrivals) {
        CHECK(t > 0.0);
        CHECK(std::isfinite(t));
    }
    const SamplePath b = simulate_rap_sequential(kDefault, 2000, 6);
    for (double t : b.interarrivals) CHECK(t > 0.0);
}

TEST_CASE("poisson moments") {
    const SamplePath path = simulate_map(poisson(2.0), 20000, 12345);
    const Moments m = summarize(path.interarrivals);
    CHECK(std::abs(m.mean - 0.5) <= 4.0 * m.se_mean);
    // squared CV of an exponential is 1
    CHECK(m.var / (m.mean * m.mean) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("erlang-2 moments: mean 2, squared CV 1/2") {
    const SamplePath path = simulate_map(erlang2(), 20000, 999);
    const Moments m = summarize(path.interarrivals);
    CHECK(std::abs(m.mean - 2.0) <= 4.0 * m.se_mean);
    CHECK(m.var / (m.mean * m.mean) == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("map simulation requires the sign constraints") {
    const RapTriple rap = build_counterexample(kDefault);
    CHECK_THROWS_AS(simulate_map(rap, 10, 1), DomainError);
}

TEST_CASE("sequential sampler matches the analytic first-interarrival law") {
    const double eps = kDefault.epsilon;
    const int n = 100000;
    std::vector<double> first;
    first.reserve(n);
    const SplitMix64 root(31415);
    for (int i = 0; i < n; ++i) {
        SplitMix64 child = root.split(static_cast<std::uint64_t>(i));
        first.push_back(simulate_rap_sequential(kDefault, 1, child.next()).interarrivals[0]);
    }
    const Moments m = summarize(first);
    CHECK(std::abs(m.mean - (1.0 - 0.5 * eps)) <= 4.0 * m.se_mean);

    // histogram against the analytic cdf F(t) = 1 - (1-eps)e^{-t} - eps e^{-2t}
    std::vector<double> edges;
    for (int i = 1; i <= 50; ++i) edges.push_back(0.1 * i);
    const auto cdf = [&](double t) {
        return 1.0 - (1.0 - eps) * std::exp(-t) - eps * std::exp(-2.0 * t);
    };
    std::vector<double> expected;
    double prev = 0;
    for (double e : edges) {
        expected.push_back(cdf(e) - prev);
        prev = cdf(e);
    }
    expected.push_back(1.0 - prev);
    const HistogramComparison h = compare_histogram(first, edges, expected);
    CHECK(h.sup_diff <= 0.005);
}

TEST_CASE("joint 2-step law against quadrature of the closed form (chi-square)") {
    const int n = 200000;
    std::vector<double> t1(static_cast<std::size_t>(n)), t2(static_cast<std::size_t>(n));
    const SplitMix64 root(2718);
    for (int i = 0; i < n; ++i) {
        SplitMix64 child = root.split(static_cast<std::uint64_t>(i));
        const SamplePath p = simulate_rap_sequential(kDefault, 2, child.next());
        t1[static_cast<std::size_t>(i)] = p.interarrivals[0];
        t2[static_cast<std::size_t>(i)] = p.interarrivals[1];
    }

    const std::vector<double> edges = {0.5, 1.0, 1.5, 2.0};  // + overflow cell per axis
    const auto cell_mass = [&](double a, double b, double c, double d) {
        const auto outer = [&](double x1) {
            const auto inner = [&](double x2) {
                return joint_density_closed_form(kDefault, TimeGrid::of({x1, x2})).value;
            };
            return integrate_adaptive(inner, c, d, 1e-9).value;
        };
        return integrate_adaptive(outer, a, b, 1e-8).value;
    };

    std::vector<double> lo = {0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> hi = {0.5, 1.0, 1.5, 2.0, 40.0};
    double chi = 0;
    double mass_total = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const double expect = cell_mass(lo[i], hi[i], lo[j], hi[j]);
            long count = 0;
            for (int s = 0; s < n; ++s) {
                const double x = t1[static_cast<std::size_t>(s)], y = t2[static_cast<std::size_t>(s)];
                const bool in_i = x >= lo[i] && (i == 4 ? true : x < hi[i]);
                const bool in_j = y >= lo[j] && (j == 4 ? true : y < hi[j]);
                if (in_i && in_j) ++count;
            }
            const double expected_count = expect * n;
            REQUIRE(expected_count > 20.0);
            chi += (count - expected_count) * (count - expected_count) / expected_count;
            mass_total += expect;
        }
    }
    CHECK(mass_total == doctest::Approx(1.0).epsilon(1e-6));
    // chi-square with 24 degrees of freedom, 1% critical value
    CHECK(chi <= 42.98);
}

TEST_CASE("map joint moments match separable quadrature of the density") {
    // E[t_j] and E[t1 t2] for the Erlang-2 MAP by one-dimensional quadrature
    // sums of the matrix factors (each interarrival enters one factor)
    const RapTriple t = erlang2();
    const std::vector<double> break_pts = {0, 0.5, 1, 1.5, 2, 3, 4, 6, 9, 14, 30};

    Matrix m_plain(2, 2), m_weighted(2, 2);
    Vec v_plain(2, 0.0), v_weighted(2, 0.0);
    for (std::size_t seg = 0; seg + 1 < break_pts.size(); ++seg) {
        const auto accumulate = [&](auto&& f) {
            // 16-point GL on the segment applied to a matrix-valued function
            const double a = break_pts[seg], b = break_pts[seg + 1];
            for (int node = 0; node < 16; ++node) {
                const double x = 0.5 * (a + b) +
                                 0.5 * (b - a) * rapcert::detail::gl_rule().x[static_cast<std::size_t>(node)];
                const double w = 0.5 * (b - a) * rapcert::detail::gl_rule().w[static_cast<std::size_t>(node)];
                f(x, w);
            }
        };
        accumulate([&](double x, double w) {
            const Matrix m = expm(t.g0, x) * t.g1;
            m_plain += w * m;
            m_weighted += (w * x) * m;
            const Vec v = matvec(m, ones(2));
            for (int i = 0; i < 2; ++i) {
                v_plain[static_cast<std::size_t>(i)] += w * v[static_cast<std::size_t>(i)];
                v_weighted[static_cast<std::size_t>(i)] += w * x * v[static_cast<std::size_t>(i)];
            }
        });
    }

    const double e_t1 = dot(t.nu, v_weighted);
    const double e_t2 = dot(t.nu * m_plain, v_weighted);
    const double e_t3 = dot((t.nu * m_plain) * m_plain, v_weighted);
    const double e_t1t2 = dot(t.nu * m_weighted, v_weighted);

    const int paths = 100000;
    std::vector<double> s1, s2, s3, s12;
    const SplitMix64 root(112233);
    for (int i = 0; i < paths; ++i) {
        SplitMix64 child = root.split(static_cast<std::uint64_t>(i));
        const SamplePath p = simulate_map(t, 3, child.next());
        s1.push_back(p.interarrivals[0]);
        s2.push_back(p.interarrivals[1]);
        s3.push_back(p.interarrivals[2]);
        s12.push_back(p.interarrivals[0] * p.interarrivals[1]);
    }
    const Moments m1 = summarize(s1), m2 = summarize(s2), m3 = summarize(s3),
                  m12 = summarize(s12);
    CHECK(std::abs(m1.mean - e_t1) <= 4.0 * m1.se_mean);
    CHECK(std::abs(m2.mean - e_t2) <= 4.0 * m2.se_mean);
    CHECK(std::abs(m3.mean - e_t3) <= 4.0 * m3.se_mean);
    CHECK(std::abs(m12.mean - e_t1t2) <= 4.0 * m12.se_mean);

    // the quadrature itself should agree with the analytic Erlang values
    CHECK(e_t1 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(e_t2 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(e_t1t2 == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("acceptance rate behaviour") {
    // eps = 0: the conditional density is exactly the envelope, acceptance 1
    const CounterexampleParams flat = CounterexampleParams::from_rational(Rational(1, 1), 0.0);
    const AcceptanceRateReport r0 = acceptance_rate_report(flat, 20, 9, 50);
    CHECK(r0.mean_acceptance == 1.0);

    const CounterexampleParams p = CounterexampleParams::from_rational(Rational(1, 1), 0.07);
    const AcceptanceRateReport r = acceptance_rate_report(p, 20, 9, 200);
    CHECK(r.mean_acceptance >= 1.0 / (1.0 + p.epsilon * (2.0 + p.m_bound)));
    CHECK(r.mean_acceptance <= 1.0);

    // deterministic given the seed
    const AcceptanceRateReport again = acceptance_rate_report(p, 20, 9, 200);
    CHECK(again.mean_acceptance == r.mean_acceptance);
    CHECK(again.proposals == r.proposals);
}

TEST_CASE("orbit renormalisation keeps row sum at one through 1000 updates") {
    const CounterexampleParams p = kDefault;
    const Matrix g1{{1.0, 0.0, 0.0}, {p.u1, p.c, -p.s}, {p.u2, p.s, p.c}};
    OrbitState orbit{{1.0 - p.epsilon, p.epsilon, 0.0}};
    SplitMix64 rng(888);
    for (int step = 0; step < 1000; ++step) {
        const double t = rng.exponential(1.0);
        const double e1 = std::exp(-t), e2 = std::exp(-2.0 * t);
        Vec scaled = {orbit.row[0] * e1, orbit.row[1] * e2, orbit.row[2] * e2};
        orbit.row = scaled * g1;
        orbit.renormalise();
        CHECK(std::abs(vec_sum(orbit.row) - 1.0) <= 1e-12);
    }
}

TEST_CASE("orbit row stays normalised over a long path") {
    // the sampler renormalises after every arrival and would throw on
    // degeneracy; a long run doubles as the drift check
    const SamplePath p = simulate_rap_sequential(kDefault, 1000, 424242);
    CHECK(p.interarrivals.size() == 1000);
    CHECK(p.accepted == 1000);
    CHECK(p.proposals >= p.accepted);
}

TEST_CASE("histogram helper sanity") {
    CHECK_THROWS_AS(compare_histogram({1.0}, {0.5}, {1.0}), StructuralError);
    const HistogramComparison h = compare_histogram({0.1, 0.2, 0.9}, {0.5}, {2.0 / 3.0, 1.0 / 3.0});
    CHECK(h.observed_mass[0] == doctest::Approx(2.0 / 3.0));
    CHECK(h.sup_diff <= 1e-12);
}
