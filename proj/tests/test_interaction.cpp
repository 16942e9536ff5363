#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rovib/interaction.hpp"
#include "rovib/params.hpp"

using namespace rovib;
using namespace rovib::quantum;
using oracles::cplx;

namespace {

ModelParameters driven(double W) {
  ModelParameters p = geo_preset();
  p.W = W;
  return p;
}

}  // namespace

TEST_CASE("the resonant pair entry") {
  const ModelParameters p = driven(1.0);
  const auto basis = Basis::build(3, 3, p);
  const auto m = interaction_matrix(basis, p, 0.0);
  const auto row = *basis.find({2, 1, 1});
  const auto col = *basis.find({1, 0, 0});
  const double expected = -0.25 * (std::sqrt(1.5) + std::sqrt(2.5)) * clm(1, 1) / clm(0, 0);
  CHECK(m.entries.at(row, col).real() == doctest::Approx(expected).epsilon(1e-14));
  CHECK(m.entries.at(row, col).imag() == 0.0);
  CHECK(std::abs(expected) == doctest::Approx(0.57274861218).epsilon(1e-9));
}

TEST_CASE("zero drive gives the zero matrix") {
  const ModelParameters p = driven(0.0);
  const auto basis = Basis::build(2, 2, p);
  const auto m = interaction_matrix(basis, p, 3.7);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) CHECK(m.entries.at(r, c) == cplx(0.0, 0.0));
}

TEST_CASE("selection rules and class structure of the nonzeros") {
  const ModelParameters p = driven(0.77);
  const auto basis = Basis::build(3, 3, p);
  const auto m = interaction_matrix(basis, p, 1.3);
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (m.entries.at(r, c) == cplx(0.0, 0.0)) continue;
      const auto& sr = basis.state(r);
      const auto& sc = basis.state(c);
      CHECK(std::abs(sr.n - sc.n) == 1);
      CHECK(std::abs(sr.l - sc.l) == 1);
      CHECK(sr.m - sc.m == sr.n - sc.n);  // dm = dn: the class label is frozen
      CHECK(k_class(sr) == k_class(sc));
    }
  // A (dn, dm) = (+1, -1) slot stays empty even though dl = 1.
  const auto row = *basis.find({2, 1, -1});
  const auto col = *basis.find({1, 0, 0});
  CHECK(m.entries.at(row, col) == cplx(0.0, 0.0));
}

TEST_CASE("hermitian at randomly drawn times") {
  const ModelParameters p = driven(1.03);
  const auto basis = Basis::build(3, 3, p);
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> dist(0.0, 2000.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = interaction_matrix(basis, p, dist(rng));
    for (std::size_t r = 0; r < basis.size(); ++r)
      for (std::size_t c = 0; c <= r; ++c)
        CHECK(std::abs(m.entries.at(r, c) - std::conj(m.entries.at(c, r))) < 1e-12);
  }
}

TEST_CASE("closed-form assembly equals the element-by-element composition") {
  const ModelParameters p = driven(0.31);
  const auto basis = Basis::build(3, 3, p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 500.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double tau = dist(rng);
    const auto m = interaction_matrix(basis, p, tau);
    for (std::size_t r = 0; r < basis.size(); ++r)
      for (std::size_t c = 0; c < basis.size(); ++c) {
        const cplx composed = oracles::composed_entry(basis.state(r), basis.state(c), p, tau);
        CHECK(std::abs(m.entries.at(r, c) - composed) < 1e-13);
      }
  }
}

TEST_CASE("coupling table matches the dense matrix path") {
  const ModelParameters p = driven(1.03);
  const auto basis = Basis::build(3, 3, p);
  const CouplingTable table(basis, p);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<cplx> d(basis.size()), got(basis.size()), want(basis.size());
  for (int trial = 0; trial < 20; ++trial) {
    for (auto& v : d) v = cplx(dist(rng), dist(rng));
    const double tau = 100.0 * std::abs(dist(rng));
    table.apply(tau, d, got);
    // i D' = exp(i tau (E_r - E_c)) W_rc D_c, written out densely. This
    // reference groups the phases as a product of large-argument factors
    // (tau * E_r up to ~3e5 rad), whose argument rounding alone costs about
    // |tau * E| * eps ~ 1e-11 in the result; the bound reflects that.
    const auto m = interaction_matrix(basis, p, tau);
    for (std::size_t r = 0; r < basis.size(); ++r) {
      cplx acc(0.0, 0.0);
      const double er = energy(basis.state(r).n, basis.state(r).l, p);
      for (std::size_t c = 0; c < basis.size(); ++c) {
        const double ec = energy(basis.state(c).n, basis.state(c).l, p);
        acc += std::polar(1.0, tau * (er - ec)) * m.entries.at(r, c) * d[c];
      }
      want[r] = cplx(0.0, -1.0) * acc;
    }
    for (std::size_t r = 0; r < basis.size(); ++r) CHECK(std::abs(got[r] - want[r]) < 1e-10);
  }
}

TEST_CASE("coordinate-list dump carries every nonzero") {
  const ModelParameters p = driven(0.5);
  const auto basis = Basis::build(1, 1, p);
  const auto m = interaction_matrix(basis, p, 0.25);
  std::ostringstream out;
  write_matrix_coordinate_list(m, out);
  std::size_t nonzeros = 0;
  for (std::size_t r = 0; r < basis.size(); ++r)
    for (std::size_t c = 0; c < basis.size(); ++c)
      if (m.entries.at(r, c) != cplx(0.0, 0.0)) ++nonzeros;
  std::size_t lines = 0;
  std::string line;
  std::istringstream in(out.str());
  while (std::getline(in, line)) ++lines;
  CHECK(lines == nonzeros);
  CHECK(nonzeros == 4);  // (0,0,0) <-> (1,1,1) and (0,1,-1) <-> (1,0,0)... both directions
}
