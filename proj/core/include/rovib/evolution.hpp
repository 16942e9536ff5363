#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "rovib/basis.hpp"
#include "rovib/interaction.hpp"
#include "rovib/ode.hpp"
#include "rovib/params.hpp"

namespace rovib::quantum {

struct EvolveOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double sample_dt = 0.25;
};

struct EvolutionSeries {
  std::vector<double> taus;
  std::vector<std::vector<std::complex<double>>> coefficients;  // one vector per sample
  ode::Stats stats;
};

// Interaction-picture derivative of the coefficient vector: the stationary
// phases times the drive matrix elements. This is the authoritative
// right-hand side; CouplingTable::apply is its implementation.
void coefficient_rhs(const CouplingTable& table, double tau,
                     std::span<const std::complex<double>> d,
                     std::span<std::complex<double>> out);

// Integrates the coefficient equations from the unit-norm initial vector to
// tau_end, sampling at multiples of sample_dt (dense output, plus the final
// time). The drive matrix is Hermitian, so the exact flow is norm and
// class preserving; tests and the acceptance suite hold the integrator to
// that.
EvolutionSeries evolve(const Basis& basis, std::span<const std::complex<double>> initial,
                       const ModelParameters& params, double tau_end,
                       const EvolveOptions& options);

// Two-state reduction of a near-resonant pair. `alpha` is the actual drive
// entry linking the pair, so the closed-form solution below is the exact
// restriction of the full dynamics to these two states.
struct TwoLevelParams {
  StateIndex initial;
  StateIndex final_state;
  double alpha = 0.0;     // signed coupling, proportional to W
  double detuning = 0.0;  // E(final) - E(initial) - drive frequency
  double rabi_frequency() const {
    return std::sqrt(alpha * alpha + 0.25 * detuning * detuning);
  }
  // Resonance-peak transfer probability alpha^2 / rabi^2.
  double peak_transfer() const {
    const double r2 = alpha * alpha + 0.25 * detuning * detuning;
    return r2 == 0.0 ? 0.0 : alpha * alpha / r2;
  }
};

// Builds the reduction for initial -> final. The final state must be the
// raised partner (dn = dm = +1, dl = +-1, same m - n class); forbidden pairs
// are rejected with ConfigError.
TwoLevelParams two_level_parameters(const StateIndex& initial, const StateIndex& final_state,
                                    const ModelParameters& params);

// Closed-form amplitudes (D_initial, D_final) at time tau for the start
// condition D_initial(0) = 1, D_final(0) = 0. The transfer probability is
// |D_final|^2 = (alpha^2 / rabi^2) sin^2(rabi * tau).
std::pair<std::complex<double>, std::complex<double>> rabi_solution(const TwoLevelParams& tl,
                                                                    double tau);

}  // namespace rovib::quantum
