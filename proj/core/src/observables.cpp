#include "rovib/observables.hpp"

#include <cmath>
#include <numbers>

#include "rovib/errors.hpp"

namespace rovib::quantum {

std::vector<double> populations(std::span<const std::complex<double>> d) {
  std::vector<double> p(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) p[i] = std::norm(d[i]);
  return p;
}

double total_population(std::span<const std::complex<double>> d) {
  double total = 0.0;
  for (const auto& c : d) total += std::norm(c);
  return total;
}

std::pair<double, double> xp_expectation(const Basis& basis,
                                         std::span<const std::complex<double>> d) {
  // z = sum sqrt(n+1) conj(D_{n,l,m}) D_{n+1,l,m}; X = Re z, P = Im z.
  std::complex<double> z(0.0, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const StateIndex& s = basis.state(i);
    const auto up = basis.find({s.n + 1, s.l, s.m});
    if (!up) continue;
    z += std::sqrt(s.n + 1.0) * std::conj(d[i]) * d[*up];
  }
  return {z.real(), z.imag()};
}

double n_expectation(const Basis& basis, std::span<const std::complex<double>> d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) acc += basis.state(i).n * std::norm(d[i]);
  return acc;
}

PhaseExpectation phase_expectation(const Basis& basis, std::span<const std::complex<double>> d) {
  // <shift-up> = sum conj(D_{n+1,l,m}) D_{n,l,m}.
  PhaseExpectation ph;
  std::complex<double> z(0.0, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const StateIndex& s = basis.state(i);
    const auto up = basis.find({s.n + 1, s.l, s.m});
    if (!up) continue;
    z += std::conj(d[*up]) * d[i];
  }
  ph.value = z;
  if (z == std::complex<double>(0.0, 0.0)) {
    ph.arg = 0.0;
    ph.valid = false;
  } else {
    ph.arg = std::arg(z);
    if (ph.arg == -std::numbers::pi) ph.arg = std::numbers::pi;  // keep (-pi, pi]
    ph.valid = true;
  }
  return ph;
}

double k_expectation(const Basis& basis, std::span<const std::complex<double>> d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    acc += (k_class(basis.state(i)) - 0.5) * std::norm(d[i]);
  return acc;
}

double boundary_population(const Basis& basis, std::span<const std::complex<double>> d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const StateIndex& s = basis.state(i);
    if (s.n == basis.n_cap() || s.l == basis.l_cap()) acc += std::norm(d[i]);
  }
  return acc;
}

ObservableSample observe(const Basis& basis, std::span<const std::complex<double>> d, double tau) {
  ObservableSample sample;
  sample.tau = tau;
  sample.total_norm = total_population(d);
  sample.n_mean = n_expectation(basis, d);
  const auto [x, p] = xp_expectation(basis, d);
  sample.x_mean = x;
  sample.p_mean = p;
  sample.phase = phase_expectation(basis, d);
  sample.k_mean = k_expectation(basis, d);
  sample.boundary_population = boundary_population(basis, d);
  return sample;
}

std::vector<std::complex<double>> poisson_like_initial_state(const Basis& basis) {
  struct Entry {
    StateIndex state;
    double weight;
  };
  static const Entry kEntries[] = {
      {{0, 0, 0}, 1.5}, {{0, 1, 0}, 0.2}, {{0, 2, 0}, 0.05},
      {{1, 0, 0}, 8.0}, {{1, 1, 0}, 0.4}, {{1, 2, 0}, 0.1},
      {{2, 0, 0}, 1.5}, {{2, 1, 0}, 0.2}, {{2, 2, 0}, 0.05},
  };
  std::vector<std::complex<double>> d(basis.size(), {0.0, 0.0});
  for (const Entry& e : kEntries) {
    const auto pos = basis.find(e.state);
    if (!pos)
      throw ConfigError("poisson_like_initial_state: basis lacks state (n,l,m) = (" +
                        std::to_string(e.state.n) + "," + std::to_string(e.state.l) + "," +
                        std::to_string(e.state.m) + ")");
    d[*pos] = std::sqrt(e.weight / 12.0);
  }
  return d;
}

}  // namespace rovib::quantum
