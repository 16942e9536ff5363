#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace rovib::ode {

struct Settings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 picks a starting step automatically
  std::uint64_t max_steps = 200'000'000;
};

struct Stats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
};

// dydt = f(tau, y). May throw to abort the integration.
using RhsFn = std::function<void(double tau, std::span<const double> y, std::span<double> dydt)>;

// Embedded Dormand-Prince 5(4) pair with the quartic interpolant for dense
// output. One instance drives one trajectory forward in time. The state can
// be replaced mid-run (restart), which the Lyapunov renormalisation uses.
//
// Error control: per-component scale abs_tol + rel_tol*max(|y|,|y_new|),
// RMS norm, step factor clamped to [0.2, 5] with safety 0.9.
class Dopri5 {
 public:
  Dopri5(std::size_t dim, RhsFn rhs, Settings settings);

  void start(double tau0, std::span<const double> y0);

  // Take one accepted step without moving past tau_limit; returns the new
  // time. Throws StepSizeUnderflowError when the controller collapses and
  // std::runtime_error when max_steps is exhausted.
  double step(double tau_limit);

  double time() const { return tau_; }
  double prev_time() const { return tau_prev_; }
  std::span<const double> state() const { return y_; }
  std::span<const double> prev_state() const { return y_prev_; }

  // Interpolated solution inside the last accepted step [prev_time, time].
  void dense(double tau, std::span<double> out) const;
  double dense_component(double tau, std::size_t index) const;

  // Replace the state (and optionally keep the tuned step size) after an
  // external modification.
  void restart(double tau, std::span<const double> y, bool keep_step_size);

  const Stats& stats() const { return stats_; }
  std::size_t dimension() const { return dim_; }

 private:
  void eval(double tau, const std::vector<double>& y, std::vector<double>& dydt);
  double pick_initial_step(double tau_limit);

  std::size_t dim_;
  RhsFn rhs_;
  Settings settings_;
  Stats stats_;

  double tau_ = 0.0;
  double tau_prev_ = 0.0;
  double h_ = 0.0;       // step proposal for the next attempt
  double h_last_ = 0.0;  // size of the last accepted step
  bool started_ = false;
  bool have_step_ = false;  // dense output available

  std::vector<double> y_, y_prev_, y_stage_, y_trial_, err_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  std::vector<double> rcont1_, rcont2_, rcont3_, rcont4_, rcont5_;
};

}  // namespace rovib::ode
