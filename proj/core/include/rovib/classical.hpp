#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rovib/ode.hpp"
#include "rovib/params.hpp"

namespace rovib::classical {

// The four conjugate variables of the rotating-frame system: the continuous
// action-like vibrational variable n, its angle psi, the polar angular
// momentum p and the polar angle theta. The azimuth is ignorable and never
// represented; its conserved momentum lives in ModelParameters::k.
struct State {
  double n = 0.0;
  double psi = 0.0;
  double p = 0.0;
  double theta = 0.0;
};

// Guard thresholds; inside these neighbourhoods the vector field is treated
// as singular and the trajectory is aborted rather than regularised.
inline constexpr double kMinSinTheta = 1e-6;
inline constexpr double kMinAction = 1e-12;  // on n + 1/2

// Rotating-frame energy in code units. Throws std::domain_error when
// sin(theta) == 0 or n < -1/2.
double hamiltonian(const State& state, const ModelParameters& params);

// Right-hand side (dn, dpsi, dp, dtheta)/dtau. Throws std::domain_error when
// the singularity guards trip.
std::array<double, 4> eom_rhs(const State& state, const ModelParameters& params);

struct Tolerances {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

struct TrajectoryPoint {
  double tau;
  State state;
};

struct Trajectory {
  std::vector<TrajectoryPoint> samples;  // one per accepted step, tau strictly increasing
  ode::Stats stats;
};

// Adaptive integration to tau_end recording every accepted step. The initial
// psi is reduced into [0, 2*pi) on entry. Throws SingularTrajectoryError or
// StepSizeUnderflowError.
Trajectory integrate(const State& initial, const ModelParameters& params, double tau_end,
                     const Tolerances& tol);

struct SectionPoint {
  double tau = 0.0;
  double psi_mod = 0.0;  // psi reduced to [0, 2*pi)
  double n = 0.0;
  // Diagnostics recorded at collection time.
  double theta_error = 0.0;  // |theta - pi/2| after refinement
  double p = 0.0;            // angular momentum at the crossing (> 0)
};

struct SectionOptions {
  int n_crossings = 2000;
  Tolerances tol{};
  double tau_max = 1e6;       // stop if the time budget runs out first
  double refine_tol = 1e-10;  // |theta - pi/2| target for the bisection
  int max_bisections = 60;
};

struct SectionResult {
  std::vector<SectionPoint> points;
  // Set when the trajectory aborted before n_crossings were collected; the
  // points gathered so far are still returned.
  std::optional<std::string> abort_reason;
  double abort_tau = 0.0;
  ode::Stats stats;
};

// Upward crossings of theta = pi/2 (dtheta/dtau > 0, i.e. p > 0), located by
// bisection on the dense output. Crossings with |p| below 1e-12 are treated
// as tangential and discarded.
SectionResult poincare_section(const State& initial, const ModelParameters& params,
                               const SectionOptions& options);

enum class PsiBranch { Zero, Pi };

// Action values n of the fixed points on the section p = 0, theta = pi/2 for
// the given psi branch: real positive roots s = n + 1/2 of the cubic
// (a + b s)^2 s = W^2/16 with a = detuning + 2*beta*k, b = 2*beta - 2*xe*we,
// kept only when they solve the unsquared balance with the branch sign.
// Ascending in n; empty when no root survives.
std::vector<double> critical_points(const ModelParameters& params, PsiBranch branch);

struct LyapunovOptions {
  double tau_end = 1e4;
  double renorm_interval = 1.0;
  double separation = 1e-9;  // initial offset applied to n
  Tolerances tol{1e-8, 1e-10};
};

// Largest Lyapunov exponent by the two-trajectory method: a shadow orbit is
// renormalised back to the reference separation every renorm_interval and
// the exponent is the mean log stretch over the second half of the run.
double largest_lyapunov(const State& initial, const ModelParameters& params,
                        const LyapunovOptions& options);

struct ScanCell {
  double W = 0.0;
  double max_lyapunov = 0.0;  // NaN when every initial condition failed
  std::vector<std::string> errors;
};

struct ChaosScan {
  std::vector<ScanCell> cells;       // one per W, in the order given
  double baseline = 0.0;             // max |lambda| at W = 0 over the initials
  double lambda_c = 0.0;             // 5 x baseline
  std::optional<double> onset_W;     // smallest W with max_lyapunov > lambda_c
};

// Runs largest_lyapunov over the W x initials grid (cells run concurrently)
// and calibrates the chaos threshold against the integrable W = 0 baseline
// computed with the same initial conditions.
ChaosScan chaos_scan(const ModelParameters& base, std::span<const double> W_grid,
                     std::span<const State> initials, const LyapunovOptions& options);

}  // namespace rovib::classical
