#include "rovib/classical.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

#include "rovib/errors.hpp"

namespace rovib::classical {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kTangentialP = 1e-12;

double wrap_angle(double psi) {
  double x = std::fmod(psi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x;
}

// Unguarded vector field; callers enforce the singularity guards.
std::array<double, 4> rhs_kernel(double n, double psi, double p, double theta,
                                 const ModelParameters& params) {
  const double s = n + 0.5;
  const double sqrt_s = std::sqrt(s);
  const double sin_t = std::sin(theta);
  const double cos_t = std::cos(theta);
  const double sin2 = sin_t * sin_t;
  const double ks = params.k + s;
  const double delta = params.hbar_detuning;
  const double x2 = 2.0 * params.hbar_xe_omega_e;
  const double b2 = 2.0 * params.beta;

  const double dn = -0.5 * params.W * sqrt_s * sin_t * std::sin(psi);
  const double dpsi =
      delta - x2 * s + (b2 / sin2) * ks - 0.25 * params.W / sqrt_s * sin_t * std::cos(psi);
  const double dp =
      (b2 / (sin2 * sin_t)) * ks * ks * cos_t + 0.5 * params.W * sqrt_s * cos_t * std::cos(psi);
  const double dtheta = b2 * p;
  return {dn, dpsi, dp, dtheta};
}

}  // namespace

double hamiltonian(const State& state, const ModelParameters& params) {
  const double s = state.n + 0.5;
  if (!(s > 0.0)) throw std::domain_error("hamiltonian: n must exceed -1/2");
  const double sin_t = std::sin(state.theta);
  if (sin_t == 0.0) throw std::domain_error("hamiltonian: sin(theta) must be nonzero");
  const double ks = params.k + s;
  return params.hbar_detuning * s - params.hbar_xe_omega_e * s * s +
         params.beta * (state.p * state.p + ks * ks / (sin_t * sin_t)) -
         0.5 * params.W * std::sqrt(s) * sin_t * std::cos(state.psi);
}

std::array<double, 4> eom_rhs(const State& state, const ModelParameters& params) {
  if (std::sin(state.theta) < kMinSinTheta)
    throw std::domain_error("eom_rhs: sin(theta) below guard");
  if (state.n + 0.5 < kMinAction) throw std::domain_error("eom_rhs: n + 1/2 below guard");
  return rhs_kernel(state.n, state.psi, state.p, state.theta, params);
}

namespace {

// Guarded RHS for the integrator; reports the singular time.
ode::RhsFn make_rhs(const ModelParameters& params) {
  return [params](double tau, std::span<const double> y, std::span<double> dydt) {
    if (std::sin(y[3]) < kMinSinTheta)
      throw SingularTrajectoryError("trajectory reached the polar axis guard (sin(theta) < 1e-6)",
                                    tau);
    if (y[0] + 0.5 < kMinAction)
      throw SingularTrajectoryError("trajectory reached the action guard (n + 1/2 < 1e-12)", tau);
    const auto d = rhs_kernel(y[0], y[1], y[2], y[3], params);
    std::copy(d.begin(), d.end(), dydt.begin());
  };
}

std::array<double, 4> pack(const State& s) { return {s.n, s.psi, s.p, s.theta}; }

State unpack(std::span<const double> y) { return State{y[0], y[1], y[2], y[3]}; }

}  // namespace

Trajectory integrate(const State& initial, const ModelParameters& params, double tau_end,
                     const Tolerances& tol) {
  ode::Settings settings;
  settings.rel_tol = tol.rel_tol;
  settings.abs_tol = tol.abs_tol;
  ode::Dopri5 stepper(4, make_rhs(params), settings);

  auto y0 = pack(initial);
  y0[1] = wrap_angle(y0[1]);
  stepper.start(0.0, y0);

  Trajectory traj;
  traj.samples.push_back({0.0, unpack(y0)});
  while (stepper.time() < tau_end) {
    const double tau = stepper.step(tau_end);
    traj.samples.push_back({tau, unpack(stepper.state())});
  }
  traj.stats = stepper.stats();
  return traj;
}

SectionResult poincare_section(const State& initial, const ModelParameters& params,
                               const SectionOptions& options) {
  ode::Settings settings;
  settings.rel_tol = options.tol.rel_tol;
  settings.abs_tol = options.tol.abs_tol;
  ode::Dopri5 stepper(4, make_rhs(params), settings);

  auto y0 = pack(initial);
  y0[1] = wrap_angle(y0[1]);
  stepper.start(0.0, y0);

  SectionResult result;
  constexpr int kSubsamples = 8;

  try {
    while (static_cast<int>(result.points.size()) < options.n_crossings &&
           stepper.time() < options.tau_max) {
      stepper.step(options.tau_max);
      const double ta = stepper.prev_time();
      const double tb = stepper.time();
      // Scan the dense output on a fixed grid so a short excursion through
      // the section inside one step is still seen.
      double t_lo = ta;
      double g_lo = stepper.prev_state()[3] - kHalfPi;
      for (int j = 1; j <= kSubsamples; ++j) {
        const double t_hi = ta + (tb - ta) * static_cast<double>(j) / kSubsamples;
        const double g_hi = (j == kSubsamples ? stepper.state()[3]
                                              : stepper.dense_component(t_hi, 3)) -
                            kHalfPi;
        if (g_lo < 0.0 && g_hi >= 0.0) {
          // Bisect the bracket down to the refinement target.
          double lo = t_lo, hi = t_hi, mid = t_hi, g_mid = g_hi;
          for (int it = 0; it < options.max_bisections; ++it) {
            mid = 0.5 * (lo + hi);
            g_mid = stepper.dense_component(mid, 3) - kHalfPi;
            if (std::abs(g_mid) < 0.1 * options.refine_tol) break;
            if (g_mid < 0.0)
              lo = mid;
            else
              hi = mid;
          }
          const double p_cross = stepper.dense_component(mid, 2);
          if (p_cross > kTangentialP && std::abs(g_mid) < options.refine_tol) {
            SectionPoint pt;
            pt.tau = mid;
            pt.psi_mod = wrap_angle(stepper.dense_component(mid, 1));
            pt.n = stepper.dense_component(mid, 0);
            pt.theta_error = std::abs(g_mid);
            pt.p = p_cross;
            result.points.push_back(pt);
            if (static_cast<int>(result.points.size()) >= options.n_crossings) break;
          }
        }
        t_lo = t_hi;
        g_lo = g_hi;
      }
    }
    if (static_cast<int>(result.points.size()) < options.n_crossings) {
      result.abort_reason = "time budget tau_max exhausted before collecting all crossings";
      result.abort_tau = stepper.time();
    }
  } catch (const SingularTrajectoryError& err) {
    result.abort_reason = err.what();
    result.abort_tau = err.tau();
  } catch (const StepSizeUnderflowError& err) {
    result.abort_reason = err.what();
    result.abort_tau = err.tau();
  }
  result.stats = stepper.stats();
  return result;
}

namespace {

// Real roots of x^3 + c2 x^2 + c1 x + c0.
std::vector<double> cubic_roots(double c2, double c1, double c0) {
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double shift = -c2 / 3.0;
  std::vector<double> roots;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  if (disc > 0.0) {
    const double rt = std::sqrt(disc);
    const double u = std::cbrt(-0.5 * q + rt);
    const double v = std::cbrt(-0.5 * q - rt);
    roots.push_back(u + v + shift);
  } else {
    const double r = std::sqrt(std::max(0.0, -p / 3.0));
    if (r == 0.0) {
      roots.push_back(shift);
    } else {
      const double arg = std::clamp(-0.5 * q / (r * r * r), -1.0, 1.0);
      const double phi = std::acos(arg);
      for (int k = 0; k < 3; ++k)
        roots.push_back(2.0 * r * std::cos((phi - kTwoPi * k) / 3.0) + shift);
    }
  }
  return roots;
}

}  // namespace

std::vector<double> critical_points(const ModelParameters& params, PsiBranch branch) {
  const double a = params.hbar_detuning + 2.0 * params.beta * params.k;
  const double b = 2.0 * params.beta - 2.0 * params.hbar_xe_omega_e;
  const double w4 = 0.25 * params.W;
  // Balance on the section: a + b s = -sign * W/(4 sqrt(s)), where the
  // branch with cos(psi) = -1 takes sign +1 and cos(psi) = +1 takes -1.
  const double sign = (branch == PsiBranch::Pi) ? 1.0 : -1.0;

  std::vector<double> s_roots;
  if (params.W == 0.0) {
    if (b != 0.0) {
      const double s = -a / b;
      if (s > 0.0) s_roots.push_back(s);
    }
  } else if (b == 0.0) {
    if (a != 0.0) s_roots.push_back(w4 * w4 / (a * a));
  } else {
    // Squared form: (a + b s)^2 s = (W/4)^2, a cubic in s.
    const double b2 = b * b;
    for (double s : cubic_roots(2.0 * a / b, (a * a) / b2, -w4 * w4 / b2)) {
      if (!(s > 0.0) || !std::isfinite(s)) continue;
      // One Newton polish step on the cubic.
      const double poly = ((b2 * s + 2.0 * a * b) * s + a * a) * s - w4 * w4;
      const double dpoly = (3.0 * b2 * s + 4.0 * a * b) * s + a * a;
      if (dpoly != 0.0) s -= poly / dpoly;
      if (s > 0.0) s_roots.push_back(s);
    }
  }

  std::vector<double> out;
  for (double s : s_roots) {
    // Back-substitute into the unsquared balance; squaring introduced the
    // roots with the wrong drive sign, which fail this residual test.
    const double residual = a + b * s + sign * w4 / std::sqrt(s);
    const double scale = std::abs(a) + std::abs(b) * s + w4 / std::sqrt(s);
    if (std::abs(residual) <= 1e-8 * std::max(scale, 1e-30)) out.push_back(s - 0.5);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-10; }),
            out.end());
  return out;
}

namespace {

double advance_to(ode::Dopri5& stepper, double tau) {
  while (stepper.time() < tau) stepper.step(tau);
  return stepper.time();
}

double separation4(std::span<const double> ya, std::span<const double> yb) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double d = yb[i] - ya[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

double largest_lyapunov(const State& initial, const ModelParameters& params,
                        const LyapunovOptions& options) {
  if (!(options.tau_end > 0.0) || !(options.renorm_interval > 0.0))
    throw ConfigError("largest_lyapunov: tau_end and renorm_interval must be positive");

  ode::Settings settings;
  settings.rel_tol = options.tol.rel_tol;
  settings.abs_tol = options.tol.abs_tol;
  ode::Dopri5 ref(4, make_rhs(params), settings);
  ode::Dopri5 shadow(4, make_rhs(params), settings);

  auto ya = pack(initial);
  ya[1] = wrap_angle(ya[1]);
  auto yb = ya;
  yb[0] += options.separation;
  ref.start(0.0, ya);
  shadow.start(0.0, yb);

  const double d0 = options.separation;
  const int windows =
      std::max(1, static_cast<int>(std::ceil(options.tau_end / options.renorm_interval - 1e-9)));
  std::vector<double> log_growth(windows, 0.0);

  std::array<double, 4> renorm{};
  std::array<double, 4> wrapped{};
  for (int i = 0; i < windows; ++i) {
    const double t_end = std::min((i + 1) * options.renorm_interval, options.tau_end);
    advance_to(ref, t_end);
    advance_to(shadow, t_end);
    const double d = separation4(ref.state(), shadow.state());
    log_growth[i] = std::log(d / d0);
    const double scale = d0 / d;
    for (std::size_t j = 0; j < 4; ++j)
      renorm[j] = ref.state()[j] + (shadow.state()[j] - ref.state()[j]) * scale;
    // psi circulates without bound, which would inflate its share of the
    // relative error allowance and eventually drown the 1e-9 separation in
    // integration noise. Shift both trajectories by the same whole number of
    // turns to keep the scale bounded; the offset cancels in the separation.
    const double turns = std::floor(ref.state()[1] / kTwoPi);
    if (turns != 0.0) {
      const double offset = kTwoPi * turns;
      std::copy(ref.state().begin(), ref.state().end(), wrapped.begin());
      wrapped[1] -= offset;
      ref.restart(t_end, wrapped, /*keep_step_size=*/true);
      renorm[1] -= offset;
    }
    shadow.restart(t_end, renorm, /*keep_step_size=*/true);
  }

  // Discard the first half as transient.
  const int start = windows / 2;
  const double t_start = start * options.renorm_interval;
  double sum = 0.0;
  for (int i = start; i < windows; ++i) sum += log_growth[i];
  return sum / (options.tau_end - t_start);
}

ChaosScan chaos_scan(const ModelParameters& base, std::span<const double> W_grid,
                     std::span<const State> initials, const LyapunovOptions& options) {
  if (W_grid.empty() || initials.empty())
    throw ConfigError("chaos_scan: W grid and initial conditions must be nonempty");

  struct CellJob {
    double lambda = std::numeric_limits<double>::quiet_NaN();
    std::string error;
  };

  auto run_cell = [&](double W, const State& init) -> CellJob {
    CellJob job;
    try {
      ModelParameters p = base;
      p.W = W;
      validate(p);
      job.lambda = largest_lyapunov(init, p, options);
    } catch (const std::exception& err) {
      job.error = err.what();
    }
    return job;
  };

  // Fan the full W x initials product out over threads; every cell is pure.
  const std::size_t n_init = initials.size();
  std::vector<std::future<CellJob>> futures;
  futures.reserve((W_grid.size() + 1) * n_init);
  for (double W : W_grid)
    for (const State& init : initials)
      futures.push_back(std::async(std::launch::async, run_cell, W, init));
  for (const State& init : initials)
    futures.push_back(std::async(std::launch::async, run_cell, 0.0, init));

  ChaosScan scan;
  scan.cells.reserve(W_grid.size());
  std::size_t idx = 0;
  for (double W : W_grid) {
    ScanCell cell;
    cell.W = W;
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t j = 0; j < n_init; ++j) {
      CellJob job = futures[idx++].get();
      if (job.error.empty()) {
        best = std::max(best, job.lambda);
        any = true;
      } else {
        cell.errors.push_back(job.error);
      }
    }
    cell.max_lyapunov = any ? best : std::numeric_limits<double>::quiet_NaN();
    scan.cells.push_back(std::move(cell));
  }

  double baseline = 0.0;
  bool baseline_ok = false;
  for (std::size_t j = 0; j < n_init; ++j) {
    CellJob job = futures[idx++].get();
    if (job.error.empty()) {
      baseline = std::max(baseline, std::abs(job.lambda));
      baseline_ok = true;
    }
  }
  scan.baseline = baseline_ok ? baseline : std::numeric_limits<double>::quiet_NaN();
  scan.lambda_c = 5.0 * scan.baseline;

  std::vector<const ScanCell*> ordered;
  for (const auto& cell : scan.cells) ordered.push_back(&cell);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ScanCell* x, const ScanCell* y) { return x->W < y->W; });
  for (const ScanCell* cell : ordered) {
    if (std::isfinite(cell->max_lyapunov) && cell->max_lyapunov > scan.lambda_c) {
      scan.onset_W = cell->W;
      break;
    }
  }
  return scan;
}

}  // namespace rovib::classical
