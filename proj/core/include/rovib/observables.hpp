#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "rovib/basis.hpp"

namespace rovib::quantum {

// Average of the upward number-shift operator over the state. Number states
// carry no phase information, so the argument is undefined at value == 0;
// by convention arg is then 0 and valid is false (plots break the line
// there instead of jumping branches).
struct PhaseExpectation {
  std::complex<double> value;
  double arg = 0.0;
  bool valid = false;
};

struct ObservableSample {
  double tau = 0.0;
  double total_norm = 0.0;
  double n_mean = 0.0;
  double x_mean = 0.0;
  double p_mean = 0.0;
  PhaseExpectation phase;
  double k_mean = 0.0;
  double boundary_population = 0.0;
};

// Per-state squared magnitudes.
std::vector<double> populations(std::span<const std::complex<double>> d);
double total_population(std::span<const std::complex<double>> d);

// Quadrature expectations <X> and <P> of the dimensionless vibrational pair
// X = (a + a*)/2, P = (a - a*)/(2i).
std::pair<double, double> xp_expectation(const Basis& basis,
                                         std::span<const std::complex<double>> d);

double n_expectation(const Basis& basis, std::span<const std::complex<double>> d);

PhaseExpectation phase_expectation(const Basis& basis, std::span<const std::complex<double>> d);

// Expectation of the conserved label (m - n) - 1/2.
double k_expectation(const Basis& basis, std::span<const std::complex<double>> d);

// Probability sitting on the truncation shells n = n_cap or l = l_cap; the
// visible measure of truncation error.
double boundary_population(const Basis& basis, std::span<const std::complex<double>> d);

ObservableSample observe(const Basis& basis, std::span<const std::complex<double>> d, double tau);

// The nine-state bell-shaped initial distribution peaked on (1, 0, 0) with
// m = 0 throughout: weights {1.5, 0.2, 0.05; 8, 0.4, 0.1; 1.5, 0.2, 0.05}/12
// over n, l <= 2, amplitudes the positive square roots. Throws ConfigError
// when the basis lacks one of the nine states.
std::vector<std::complex<double>> poisson_like_initial_state(const Basis& basis);

}  // namespace rovib::quantum
