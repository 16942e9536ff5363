#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rovib/matrix_elements.hpp"
#include "rovib/params.hpp"

using namespace rovib;
using namespace rovib::quantum;

TEST_CASE("spectrum bound") {
  CHECK(n_bound(geo_preset()) == 223);

  ModelParameters p = geo_preset();
  p.hbar_xe_omega_e = 0.5 * p.hbar_omega_e;  // xe = 1/2
  CHECK(n_bound(p) == 0);
  p.hbar_xe_omega_e = 0.25 * p.hbar_omega_e;  // xe = 1/4
  CHECK(n_bound(p) == 1);
}

TEST_CASE("level energies at the molecular constants") {
  const ModelParameters p = geo_preset();
  CHECK(energy(0, 0, p) == doctest::Approx(492.35).epsilon(1e-12));
  CHECK(energy(1, 0, p) == doctest::Approx(1473.75).epsilon(1e-12));
  CHECK(energy(2, 1, p) == doctest::Approx(2451.71).epsilon(1e-12));
}

TEST_CASE("the ladder spacing stays positive up to the bound") {
  for (double ratio : {0.1, 0.25, 1.0 / 3.0, 0.002231688}) {
    ModelParameters p = geo_preset();
    p.hbar_xe_omega_e = ratio * p.hbar_omega_e;
    const int bound = n_bound(p);
    for (int n = 0; n < bound; ++n) CHECK(energy(n + 1, 0, p) > energy(n, 0, p));
  }
}

TEST_CASE("angular normalisation coefficients") {
  CHECK(clm(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(clm(1, 0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(clm(2, 1) == doctest::Approx(std::sqrt(12.0 / 5.0)).epsilon(1e-15));
  CHECK_THROWS_AS(clm(1, 2), std::domain_error);
  CHECK_THROWS_AS(clm(-1, 0), std::domain_error);
}

TEST_CASE("exact and log-gamma factorial paths agree") {
  for (int l = 0; l <= 10; ++l)
    for (int m = -l; m <= l; ++m) {
      const double via_lgamma =
          std::sqrt(2.0 * std::exp(std::lgamma(l + m + 1.0) - std::lgamma(l - m + 1.0)) /
                    (2.0 * l + 1.0));
      CHECK(clm(l, m) == doctest::Approx(via_lgamma).epsilon(1e-14));
    }
}

TEST_CASE("vibrational elements at small quantum numbers") {
  CHECK(vib_sqrt_cos(1, 0) == doctest::Approx(0.5 * std::sqrt(1.5)).epsilon(1e-15));
  CHECK(vib_sqrt_cos(2, 0) == 0.0);
  CHECK(vib_cos_sym(2, 1) ==
        doctest::Approx(0.5 * (std::sqrt(2.5) + std::sqrt(1.5))).epsilon(1e-14));
}

TEST_CASE("vibrational elements against dense shift-operator products") {
  const int dim = 20;
  const auto sqrt_half = oracles::number_diag(dim, 0.5, 0.5);
  const auto cosm = oracles::cos_phase(dim);
  const auto sinm = oracles::sin_phase(dim);
  const auto sqrt_cos = sqrt_half * cosm;
  const auto cos_sqrt = cosm * sqrt_half;
  const auto sqrt_sin = sqrt_half * sinm;
  const auto sin_sqrt = sinm * sqrt_half;
  // Stay away from the truncation boundary, where the shift matrices lose
  // their last entry.
  for (int np = 0; np <= dim - 2; ++np)
    for (int n = 0; n <= dim - 2; ++n) {
      CHECK(std::abs(sqrt_cos.at(np, n) - oracles::cplx(vib_sqrt_cos(np, n), 0.0)) < 1e-13);
      CHECK(std::abs(cos_sqrt.at(np, n) - oracles::cplx(vib_cos_sqrt(np, n), 0.0)) < 1e-13);
      CHECK(std::abs(sqrt_sin.at(np, n) - oracles::cplx(0.0, -vib_sqrt_sin_imag(np, n))) < 1e-13);
      CHECK(std::abs(sin_sqrt.at(np, n) - oracles::cplx(0.0, -vib_sin_sqrt_imag(np, n))) < 1e-13);
    }
}

TEST_CASE("phase-shift operator moves number states up by one") {
  const int dim = 12;
  const auto up = oracles::shift_up(dim);
  for (int n = 0; n + 1 < dim; ++n)
    for (int r = 0; r < dim; ++r)
      CHECK(std::abs(up.at(r, n) - oracles::cplx(r == n + 1 ? 1.0 : 0.0, 0.0)) < 1e-14);
}

TEST_CASE("number/phase commutator on the truncated basis") {
  const int dim = 12;
  const auto nhat = oracles::number_diag(dim, 0.0, 1.0);
  const auto cosm = oracles::cos_phase(dim);
  const auto sinm = oracles::sin_phase(dim);
  // Commuting with the diagonal number operator needs no out-of-block sums,
  // so the identity holds on every retained entry.
  const auto comm = nhat * cosm - cosm * nhat;
  const auto expected = oracles::cplx(0.0, 1.0) * sinm;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) CHECK(std::abs(comm.at(r, c) - expected.at(r, c)) < 1e-14);
  // Truncation shows up where two shifts meet the boundary: lowering after
  // raising loses exactly the last diagonal entry.
  const auto down_up = oracles::shift_down(dim) * oracles::shift_up(dim);
  for (int n = 0; n < dim - 1; ++n)
    CHECK(std::abs(down_up.at(n, n) - oracles::cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(down_up.at(dim - 1, dim - 1)) < 1e-14);
}

TEST_CASE("angular dipole elements at small quantum numbers") {
  const auto a = ang_sin_cos(1, 1, 0, 0);
  CHECK(a.real() == doctest::Approx(0.40824829046386296).epsilon(1e-12));
  CHECK(a.imag() == 0.0);
  CHECK(ang_sin_cos(1, 0, 0, 0) == oracles::cplx(0.0, 0.0));  // dm = 0 forbidden
  const auto b = ang_sin_sin(1, 1, 0, 0);
  CHECK(b == oracles::cplx(0.0, -a.real()));  // the cos element divided by i
  CHECK_THROWS_AS(ang_sin_cos(1, 2, 0, 0), std::domain_error);
}

TEST_CASE("angular dipole elements against quadrature, small orders") {
  for (int l = 0; l <= 2; ++l)
    for (int m = -l; m <= l; ++m)
      for (int lp = 0; lp <= 2; ++lp)
        for (int mp = -lp; mp <= lp; ++mp) {
          const auto qc = oracles::angular_element_quadrature(lp, mp, l, m, true);
          const auto qs = oracles::angular_element_quadrature(lp, mp, l, m, false);
          CHECK(std::abs(qc - ang_sin_cos(lp, mp, l, m)) < 1e-12);
          CHECK(std::abs(qs - ang_sin_sin(lp, mp, l, m)) < 1e-12);
        }
}
