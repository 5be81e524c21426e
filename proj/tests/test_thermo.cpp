#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "textthermo/errors.hpp"
#include "textthermo/thermo.hpp"

using namespace textthermo;

namespace {

double rel_err(double got, long double want) {
    return static_cast<double>(fabsl(got - want) / fabsl(want));
}

}  // namespace

TEST_SUITE("thermo") {

TEST_CASE("potential_energy basics") {
    // zero exactly at the vocabulary expectation, positive elsewhere
    for (double nv : {0.3, 1.0, 5.0, 1234.5}) {
        CAPTURE(nv);
        CHECK(potential_energy(nv, nv, 2.0) == 0.0);
        CHECK(potential_energy(0.5 * nv, nv, 2.0) > 0.0);
        CHECK(potential_energy(2.0 * nv, nv, 2.0) > 0.0);
    }
    // hand references
    CHECK(potential_energy(2.0, 1.0, 1.0) ==
          doctest::Approx(0.30685281944005469058).epsilon(1e-14));
    CHECK(potential_energy(1.0, 5.0, 1.0) ==
          doctest::Approx(4.047189562170501873).epsilon(1e-14));
    // linear in the rate
    CHECK(potential_energy(7.0, 2.0, 3.0) ==
          doctest::Approx(3.0 * potential_energy(7.0, 2.0, 1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(potential_energy(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(potential_energy(-1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(potential_energy(1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("potential_energy stays accurate near its minimum") {
    // the direct expression cancels badly near x = vocab_freq; compare
    // against an extended-precision evaluation of the same quantity
    const double nv = 100.0, b = 1.5;
    for (double eps : {1e-3, 1e-6, 1e-9}) {
        CAPTURE(eps);
        const double x = nv * (1.0 + eps);
        const long double want = oracle::potential(x, nv, b);
        const double got = potential_energy(x, nv, b);
        CHECK(std::fabs(got - static_cast<double>(want)) <=
              1e-12 * std::max(1.0L, fabsl(want)));
    }
}

TEST_CASE("total_energy splits into combinatorial and potential parts") {
    const ThermoInput in{2, 1.0, 1.0, 1.0};
    CHECK(total_energy(1, in) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK(total_energy(2, in) ==
          doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
    // doubling beta halves the combinatorial share
    const ThermoInput in2{2, 1.0, 1.0, 2.0};
    CHECK(total_energy(1, in2) ==
          doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(total_energy(0, in), DomainError);
    CHECK_THROWS_AS(total_energy(3, in), DomainError);
}

TEST_CASE("two-occurrence reference ensemble") {
    // N = 2, vocab_freq = 1, rate = 1, beta = 1: small enough to verify
    // against 50-digit arithmetic
    const ThermoInput in{2, 1.0, 1.0, 1.0};
    CHECK(rel_err(log_partition(in), 1.0064088680781681435L) < 1e-14);
    CHECK(rel_err(free_energy(in), -1.0064088680781681435L) < 1e-14);
    CHECK(rel_err(internal_energy(in), 0.082525433411598778784L) < 1e-13);
    CHECK(rel_err(entropy_exact(in), 1.0889343014897669223L) < 1e-13);
    CHECK(rel_err(specific_heat_exact(in), 0.01851271475808935258L) < 1e-12);
}

TEST_CASE("single-occurrence texts have a one-state ensemble") {
    const ThermoInput in{1, 2.0, 1.5, 3.0};
    const double ep1 = potential_energy(1.0, 2.0, 1.5);
    CHECK(log_partition(in) == doctest::Approx(-3.0 * ep1).epsilon(1e-13));
    CHECK(internal_energy(in) == doctest::Approx(ep1).epsilon(1e-13));
    CHECK(entropy_exact(in) == doctest::Approx(0.0));
    CHECK(specific_heat_exact(in) == 0.0);
}

TEST_CASE("high-temperature limits") {
    // as beta -> 0 every configuration is equally likely:
    // log Z -> log(2^N - 1) and, for N = 2, S -> log 3
    const ThermoInput small{2, 1.0, 1.0, 1e-9};
    CHECK(log_partition(small) ==
          doctest::Approx(1.0986122886681096914).epsilon(1e-7));
    CHECK(entropy_exact(small) ==
          doctest::Approx(1.0986122886681096914).epsilon(1e-6));

    const ThermoInput n20{20, 6.0, 0.7, 1e-9};
    CHECK(log_partition(n20) ==
          doctest::Approx(13.862942657524135034).epsilon(1e-7));
}

TEST_CASE("ensemble quantities match the direct-sum reference") {
    struct Case { std::int64_t n; double nv, b, beta; };
    const Case cases[] = {
        {2, 1.0, 1.0, 1.0},     {2, 3.0, 0.5, 0.2},    {3, 1.5, 2.0, 5.0},
        {5, 5.0, 1.0, 1.0},     {5, 0.8, 0.3, 12.0},   {7, 2.0, 1.0, 0.01},
        {10, 3.0, 2.0, 0.5},    {10, 30.0, 0.1, 3.0},  {17, 4.0, 0.05, 40.0},
        {25, 25.0, 1.0, 2.0},   {40, 8.0, 0.6, 0.1},   {64, 100.0, 0.02, 7.0},
        {100, 10.0, 1.0, 1.0},  {100, 300.0, 0.004, 9.0}, {128, 60.0, 0.15, 0.7},
        {250, 75.0, 0.3, 0.05}, {333, 500.0, 0.01, 2.5},  {512, 51.2, 0.08, 1.3},
        {777, 200.0, 0.02, 6.0}, {1000, 100.0, 0.05, 0.5}, {1000, 2000.0, 0.001, 20.0},
        {1500, 450.0, 0.01, 0.9}, {2000, 100.0, 0.07, 0.02}, {2000, 900.0, 0.003, 15.0},
        {2048, 2048.0, 0.002, 1.0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.nv);
        CAPTURE(c.b);
        CAPTURE(c.beta);
        const ThermoInput in{c.n, c.nv, c.b, c.beta};
        const auto ref = oracle::ensemble(c.n, c.nv, c.b, c.beta);
        CHECK(rel_err(log_partition(in), ref.log_z) < 1e-10);
        CHECK(rel_err(free_energy(in), ref.free_energy) < 1e-10);
        CHECK(rel_err(internal_energy(in), ref.internal_energy) < 1e-9);
        CHECK(rel_err(entropy_exact(in), ref.entropy) < 1e-9);
        if (ref.specific_heat > 1e-30) {
            CHECK(rel_err(specific_heat_exact(in), ref.specific_heat) < 1e-8);
        }
    }
}

TEST_CASE("thermodynamic identity holds on random inputs") {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(
            std::floor(std::exp(u(rng) * std::log(1500.0))));
        const double nv = n * std::exp((u(rng) * 2.0 - 1.0) * std::log(8.0));
        const double b = std::exp((u(rng) * 2.0 - 1.0) * std::log(20.0));
        const double beta = std::exp((u(rng) * 2.0 - 1.0) * std::log(50.0));
        CAPTURE(n);
        CAPTURE(nv);
        CAPTURE(b);
        CAPTURE(beta);
        const ThermoInput in{n, nv, b, beta};
        const double s = entropy_exact(in);
        const double rhs = beta * (internal_energy(in) - free_energy(in));
        CHECK(std::fabs(s - rhs) <= 1e-9 * std::max(1.0, std::fabs(s)));
        // the entropy of a discrete ensemble is non-negative
        CHECK(s >= -1e-12);
        CHECK(specific_heat_exact(in) >= 0.0);
    }
}

TEST_CASE("internal energy equals the beta-derivative of beta*F") {
    struct Case { std::int64_t n; double nv, b, beta; };
    const Case cases[] = {
        {5, 5.0, 1.0, 1.0}, {50, 20.0, 0.5, 2.0}, {300, 90.0, 0.1, 0.3},
        {1000, 100.0, 0.05, 5.0},
    };
    for (const auto& c : cases) {
        CAPTURE(c.n);
        const double h = 1e-5 * c.beta;
        const long double lo = oracle::log_partition(c.n, c.nv, c.b, c.beta - h);
        const long double hi = oracle::log_partition(c.n, c.nv, c.b, c.beta + h);
        const double dlogz = static_cast<double>((hi - lo) / (2.0L * h));
        const ThermoInput in{c.n, c.nv, c.b, c.beta};
        const double u = internal_energy(in);
        CHECK(std::fabs(u + dlogz) <= 1e-6 * std::max(1.0, std::fabs(u)));
    }
}

TEST_CASE("finite-difference specific heat agrees with the exact form") {
    const ThermoInput in{2, 1.0, 1.0, 1.0};
    const double exact = 0.01851271475808935258;
    const double fd1 = specific_heat_fd(in, 1e-3);
    CHECK(std::fabs(fd1 - exact) / exact < 2e-5);

    // halving the step shrinks the truncation error about fourfold
    const double fd2 = specific_heat_fd(in, 5e-4);
    const double r = std::fabs(fd1 - exact) / std::fabs(fd2 - exact);
    CHECK(r > 3.0);
    CHECK(r < 5.0);

    CHECK_THROWS_AS(specific_heat_fd(in, 0.0), DomainError);
    CHECK_THROWS_AS(specific_heat_fd(in, -1e-3), DomainError);
    // the step must leave T - dT positive
    CHECK_THROWS_AS(specific_heat_fd(in, 2.0), DomainError);
}

TEST_CASE("order parameter closed form matches the reference") {
    // vocab_freq = 5, rate = 1, N = 5, beta = 1
    const ThermoInput in{5, 5.0, 1.0, 1.0};
    CHECK(order_param_closed(in) ==
          doctest::Approx(3.1905187168255538926).epsilon(1e-10));
    CHECK(order_param_numeric(in) ==
          doctest::Approx(3.1905187168255538926).epsilon(1e-9));
}

TEST_CASE("order parameter satisfies the stationarity equation") {
    struct Case { std::int64_t n; double nv, b, beta; };
    const Case cases[] = {
        {5, 5.0, 1.0, 1.0}, {10, 3.0, 1.0, 1000.0}, {100, 40.0, 0.2, 0.01},
        {10000, 2500.0, 0.6, 3.0}, {2, 0.5, 4.0, 0.7},
    };
    for (const auto& c : cases) {
        CAPTURE(c.n);
        CAPTURE(c.beta);
        const ThermoInput in{c.n, c.nv, c.b, c.beta};
        const double m = order_param_closed(in);
        CHECK(m > 0.0);
        CHECK(m < static_cast<double>(c.n));
        const double resid =
            std::log(m / (static_cast<double>(c.n) - m)) / c.beta -
            c.b * (c.nv - m) / m;
        CHECK(std::fabs(resid) < 1e-10 * std::max(1.0, std::fabs(c.b * c.nv)));
    }
}

TEST_CASE("closed and bisection order parameters coincide") {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(
            std::floor(std::exp(u(rng) * std::log(9999.0))));
        const double nv = n * std::exp((u(rng) * 2.0 - 1.0) * std::log(10.0));
        const double b = std::exp((u(rng) * 2.0 - 1.0) * std::log(15.0));
        const double beta = std::exp((u(rng) * 2.0 - 1.0) * std::log(60.0));
        CAPTURE(n);
        CAPTURE(nv);
        CAPTURE(b);
        CAPTURE(beta);
        const ThermoInput in{n, nv, b, beta};
        const double mc = order_param_closed(in);
        const double mn = order_param_numeric(in);
        CHECK(std::fabs(mc - mn) <= 1e-8 * std::max(1.0, std::fabs(mc)));
    }
}

TEST_CASE("order parameter limits") {
    // strong coupling drives nearly all occurrences into the vocabulary
    const ThermoInput cold{10, 3.0, 1.0, 1000.0};
    CHECK(order_param_closed(cold) == doctest::Approx(3.0).epsilon(0.01));
    // at high temperature mixing wins and m approaches N/2
    const ThermoInput hot{10, 3.0, 1.0, 1e-9};
    CHECK(order_param_closed(hot) == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("entropy_saddle reference values and domain") {
    CHECK(entropy_saddle(1.0, 4.0) ==
          doctest::Approx(2.2493405784752334012).epsilon(1e-13));
    CHECK(entropy_saddle(5.0, 10.0) ==
          doctest::Approx(6.9314718055994530942).epsilon(1e-13));
    // symmetric in m and total - m
    CHECK(entropy_saddle(3.0, 10.0) ==
          doctest::Approx(entropy_saddle(7.0, 10.0)).epsilon(1e-13));
    CHECK_THROWS_AS(entropy_saddle(0.0, 4.0), DomainError);
    CHECK_THROWS_AS(entropy_saddle(4.0, 4.0), DomainError);
    CHECK_THROWS_AS(entropy_saddle(-1.0, 4.0), DomainError);
    CHECK_THROWS_AS(entropy_saddle(5.0, 4.0), DomainError);
}

TEST_CASE("saddle evaluation is continuous across the cutoff") {
    // just below the cutoff the sum is exact, just above it is a saddle
    // approximation; at this size the two differ by < 1e-3 per token
    const double nv_frac = 0.4, b = 0.8, beta = 1.2;
    const std::int64_t n_lo = kExactSumCutoff;
    const std::int64_t n_hi = kExactSumCutoff + 10;
    const ThermoInput lo{n_lo, nv_frac * n_lo, b, beta};
    const ThermoInput hi{n_hi, nv_frac * n_hi, b, beta};
    const double f_lo = free_energy(lo) / static_cast<double>(n_lo);
    const double f_hi = free_energy(hi) / static_cast<double>(n_hi);
    CHECK(std::fabs(f_lo - f_hi) < 1e-3 * std::max(1.0, std::fabs(f_lo)));
    const double s_lo = entropy_exact(lo) / static_cast<double>(n_lo);
    const double s_hi = entropy_exact(hi) / static_cast<double>(n_hi);
    CHECK(std::fabs(s_lo - s_hi) < 1e-3 * std::max(1.0, std::fabs(s_lo)));
    CHECK(specific_heat_exact(hi) >= 0.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(log_partition(ThermoInput{0, 1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(log_partition(ThermoInput{2, 0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(log_partition(ThermoInput{2, 1.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(log_partition(ThermoInput{2, 1.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(internal_energy(ThermoInput{2, 1.0, 1.0,
                    std::numeric_limits<double>::infinity()}), DomainError);
}

TEST_CASE("beta grids") {
    const auto grid = default_beta_grid();
    REQUIRE(grid.size() == 200);
    CHECK(grid.front() == 1e-2);
    CHECK(grid.back() == 1e2);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
    // log spacing: constant ratio between neighbors
    const double r0 = grid[1] / grid[0];
    const double r1 = grid[100] / grid[99];
    CHECK(r0 == doctest::Approx(r1).epsilon(1e-10));

    const auto g2 = make_beta_grid(0.5, 2.0, 2);
    REQUIRE(g2.size() == 2);
    CHECK(g2[0] == 0.5);
    CHECK(g2[1] == 2.0);

    CHECK_THROWS_AS(make_beta_grid(1.0, 0.5, 10), DomainError);
    CHECK_THROWS_AS(make_beta_grid(0.0, 1.0, 10), DomainError);
    CHECK_THROWS_AS(make_beta_grid(0.5, 2.0, 1), DomainError);
}

TEST_CASE("thermo_curve matches pointwise evaluation") {
    const auto grid = make_beta_grid(0.1, 10.0, 7);
    const auto curve = thermo_curve(25, 10.0, 0.7, grid);
    REQUIRE(curve.points.size() == 7);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = curve.points[i];
        CHECK(p.beta == grid[i]);
        const ThermoInput in{25, 10.0, 0.7, grid[i]};
        CHECK(p.free_energy == doctest::Approx(free_energy(in)).epsilon(1e-12));
        CHECK(p.internal_energy ==
              doctest::Approx(internal_energy(in)).epsilon(1e-12));
        CHECK(p.entropy == doctest::Approx(entropy_exact(in)).epsilon(1e-12));
        CHECK(p.specific_heat ==
              doctest::Approx(specific_heat_exact(in)).epsilon(1e-12));
        CHECK(p.order_param ==
              doctest::Approx(order_param_closed(in)).epsilon(1e-12));
    }
}

TEST_CASE("entropy is non-increasing in beta along a curve") {
    const auto curve = thermo_curve(40, 12.0, 0.9, default_beta_grid());
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].entropy <= curve.points[i - 1].entropy + 1e-10);
    }
}

TEST_CASE("specific heat has an interior peak for a bound word") {
    // vocab_freq = 5, rate = 1, N = 5 over the default grid
    const auto curve = thermo_curve(5, 5.0, 1.0, default_beta_grid());
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        if (curve.points[i].specific_heat > curve.points[best].specific_heat)
            best = i;
    }
    CHECK(best == 171);
    CHECK(curve.points[best].specific_heat ==
          doctest::Approx(1.44198).epsilon(1e-3));
    CHECK(curve.points.front().specific_heat <
          0.01 * curve.points[best].specific_heat);
    CHECK(curve.points.back().specific_heat <
          0.01 * curve.points[best].specific_heat);
}

TEST_CASE("write_curve_csv format and determinism") {
    const auto grid = make_beta_grid(0.5, 2.0, 3);
    const auto curve = thermo_curve(4, 2.0, 1.0, grid);
    std::ostringstream a, b;
    write_curve_csv(curve, "sample", a);
    write_curve_csv(curve, "sample", b);
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "word,beta,T,F,U,S,Cv,m");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("sample,", 0) == 0);
        ++rows;
    }
    CHECK(rows == 3);
}

}  // TEST_SUITE
