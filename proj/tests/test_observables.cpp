#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rovib/errors.hpp"
#include "rovib/evolution.hpp"
#include "rovib/observables.hpp"
#include "rovib/params.hpp"

using namespace rovib;
using namespace rovib::quantum;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> vibrational_pair(const Basis& basis, cplx c0, cplx c1) {
  std::vector<cplx> d(basis.size(), cplx(0.0, 0.0));
  d[*basis.find({0, 0, 0})] = c0;
  d[*basis.find({1, 0, 0})] = c1;
  return d;
}

}  // namespace

TEST_CASE("populations of the bell-shaped initial state") {
  const auto basis = Basis::build(3, 3, geo_preset());
  const auto d = poisson_like_initial_state(basis);
  const auto p = populations(d);
  CHECK(p[*basis.find({1, 0, 0})] == doctest::Approx(8.0 / 12.0).epsilon(1e-14));
  CHECK(p[*basis.find({0, 2, 0})] == doctest::Approx(0.05 / 12.0).epsilon(1e-14));
  CHECK(d[*basis.find({1, 0, 0})].real() == doctest::Approx(0.816496580927726).epsilon(1e-13));
  CHECK(d[*basis.find({0, 2, 0})].real() == doctest::Approx(0.0645497224367903).epsilon(1e-12));
  CHECK(total_population(d) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("the nine-state initial distribution needs its nine states") {
  CHECK_THROWS_AS(poisson_like_initial_state(Basis::build(1, 2, geo_preset())), ConfigError);
  CHECK_THROWS_AS(poisson_like_initial_state(Basis::build(2, 1, geo_preset())), ConfigError);
  CHECK_NOTHROW(poisson_like_initial_state(Basis::build(2, 2, geo_preset())));
}

TEST_CASE("quadrature expectations of simple superpositions") {
  const auto basis = Basis::build(3, 3, geo_preset());
  const double r = 1.0 / std::sqrt(2.0);

  auto [x0, p0] = xp_expectation(basis, vibrational_pair(basis, 1.0, 0.0));
  CHECK(x0 == 0.0);
  CHECK(p0 == 0.0);

  auto [x1, p1] = xp_expectation(basis, vibrational_pair(basis, r, r));
  CHECK(x1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p1 == doctest::Approx(0.0).epsilon(1e-14));

  auto [x2, p2] = xp_expectation(basis, vibrational_pair(basis, r, cplx(0.0, r)));
  CHECK(x2 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(p2 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("number and phase expectations") {
  const auto basis = Basis::build(3, 3, geo_preset());
  const double r = 1.0 / std::sqrt(2.0);

  SUBCASE("a number state has no phase") {
    std::vector<cplx> d(basis.size(), cplx(0.0, 0.0));
    d[*basis.find({2, 1, -1})] = 1.0;
    CHECK(n_expectation(basis, d) == 2.0);
    const auto ph = phase_expectation(basis, d);
    CHECK(ph.value == cplx(0.0, 0.0));
    CHECK(ph.arg == 0.0);
    CHECK(!ph.valid);
  }

  SUBCASE("an equal superposition points along the real axis") {
    const auto d = vibrational_pair(basis, r, r);
    CHECK(n_expectation(basis, d) == doctest::Approx(0.5).epsilon(1e-14));
    const auto ph = phase_expectation(basis, d);
    CHECK(ph.valid);
    CHECK(ph.value.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ph.arg == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("a relative phase shows up with the sign of the shift convention") {
    const auto d = vibrational_pair(basis, r, std::polar(r, std::numbers::pi / 3.0));
    const auto ph = phase_expectation(basis, d);
    CHECK(ph.valid);
    // <shift-up> = conj(D_1) D_0, so the argument is minus the relative phase.
    CHECK(ph.arg == doctest::Approx(-std::numbers::pi / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("phase expectation is a contraction") {
  const auto basis = Basis::build(3, 3, geo_preset());
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<cplx> d(basis.size());
    double norm2 = 0.0;
    for (auto& v : d) {
      v = cplx(dist(rng), dist(rng));
      norm2 += std::norm(v);
    }
    for (auto& v : d) v /= std::sqrt(norm2);
    CHECK(std::abs(phase_expectation(basis, d).value) <= 1.0 + 1e-14);
  }
}

TEST_CASE("conserved-label expectations") {
  const auto basis = Basis::build(3, 3, geo_preset());
  std::vector<cplx> d(basis.size(), cplx(0.0, 0.0));
  d[*basis.find({1, 0, 0})] = 1.0;
  CHECK(k_expectation(basis, d) == -1.5);
  std::fill(d.begin(), d.end(), cplx(0.0, 0.0));
  d[*basis.find({2, 1, 1})] = 1.0;
  CHECK(k_expectation(basis, d) == -1.5);

  // Brute force over the nine weights of the bell-shaped state (m = 0, so
  // every (n, l, 0) entry carries -n - 1/2).
  const double by_hand = (1.75 * -0.5 + 8.5 * -1.5 + 1.75 * -2.5) / 12.0;
  CHECK(by_hand == -1.5);
  CHECK(k_expectation(basis, poisson_like_initial_state(basis)) ==
        doctest::Approx(by_hand).epsilon(1e-14));
}

TEST_CASE("boundary population sees exactly the cap shells") {
  const auto basis = Basis::build(3, 3, geo_preset());
  std::vector<cplx> d(basis.size(), cplx(0.0, 0.0));
  d[*basis.find({3, 0, 0})] = std::sqrt(0.25);  // n at the cap
  d[*basis.find({0, 3, 2})] = std::sqrt(0.25);  // l at the cap
  d[*basis.find({1, 1, 0})] = std::sqrt(0.5);   // interior
  CHECK(boundary_population(basis, d) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("observables are frozen without drive and k stays put with it") {
  ModelParameters p = geo_preset();
  p.W = 0.0;
  const auto basis = Basis::build(3, 3, p);
  const auto d0 = poisson_like_initial_state(basis);
  auto series = evolve(basis, d0, p, 30.0, {1e-10, 1e-14, 3.0});
  const auto first = observe(basis, series.coefficients.front(), 0.0);
  for (std::size_t i = 1; i < series.taus.size(); ++i) {
    const auto s = observe(basis, series.coefficients[i], series.taus[i]);
    CHECK(s.n_mean == first.n_mean);
    CHECK(s.x_mean == first.x_mean);
    CHECK(s.k_mean == first.k_mean);
  }

  p.W = 1.03;
  series = evolve(basis, d0, p, 60.0, {1e-10, 1e-14, 2.0});
  const double k0 = k_expectation(basis, series.coefficients.front());
  for (const auto& d : series.coefficients) {
    CHECK(std::abs(k_expectation(basis, d) - k0) < 1e-10);
    // Two code paths over the same data.
    CHECK(std::abs(total_population(d) -
                   [&] {
                     double acc = 0.0;
                     for (double v : populations(d)) acc += v;
                     return acc;
                   }()) < 1e-14);
  }
}
