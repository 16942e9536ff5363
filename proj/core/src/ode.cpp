#include "rovib/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rovib/errors.hpp"

namespace rovib::ode {

namespace {

// Dormand-Prince coefficients.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
// Difference between the 5th order weights and the embedded 4th order ones.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Interpolant weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;

}  // namespace

Dopri5::Dopri5(std::size_t dim, RhsFn rhs, Settings settings)
    : dim_(dim), rhs_(std::move(rhs)), settings_(settings) {
  auto sized = [dim](std::vector<double>& v) { v.assign(dim, 0.0); };
  sized(y_);
  sized(y_prev_);
  sized(y_stage_);
  sized(y_trial_);
  sized(err_);
  sized(k1_);
  sized(k2_);
  sized(k3_);
  sized(k4_);
  sized(k5_);
  sized(k6_);
  sized(k7_);
  sized(rcont1_);
  sized(rcont2_);
  sized(rcont3_);
  sized(rcont4_);
  sized(rcont5_);
}

void Dopri5::eval(double tau, const std::vector<double>& y, std::vector<double>& dydt) {
  rhs_(tau, std::span<const double>(y), std::span<double>(dydt));
  ++stats_.rhs_evals;
}

void Dopri5::start(double tau0, std::span<const double> y0) {
  if (y0.size() != dim_) throw std::invalid_argument("Dopri5::start: dimension mismatch");
  std::copy(y0.begin(), y0.end(), y_.begin());
  tau_ = tau0;
  tau_prev_ = tau0;
  eval(tau_, y_, k1_);
  h_ = settings_.initial_step;
  started_ = true;
  have_step_ = false;
}

void Dopri5::restart(double tau, std::span<const double> y, bool keep_step_size) {
  if (y.size() != dim_) throw std::invalid_argument("Dopri5::restart: dimension mismatch");
  std::copy(y.begin(), y.end(), y_.begin());
  tau_ = tau;
  tau_prev_ = tau;
  eval(tau_, y_, k1_);
  if (!keep_step_size) h_ = settings_.initial_step;
  started_ = true;
  have_step_ = false;
}

double Dopri5::pick_initial_step(double tau_limit) {
  // Standard starting-step heuristic: match the scale of y and f, probe one
  // explicit Euler step, then bound by the estimated second derivative.
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = settings_.abs_tol + settings_.rel_tol * std::abs(y_[i]);
    d0 += (y_[i] / sc) * (y_[i] / sc);
    d1 += (k1_[i] / sc) * (k1_[i] / sc);
  }
  d0 = std::sqrt(d0 / static_cast<double>(dim_));
  d1 = std::sqrt(d1 / static_cast<double>(dim_));
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * (d0 / d1);
  h0 = std::min(h0, tau_limit - tau_);
  for (std::size_t i = 0; i < dim_; ++i) y_stage_[i] = y_[i] + h0 * k1_[i];
  eval(tau_ + h0, y_stage_, k2_);
  double d2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = settings_.abs_tol + settings_.rel_tol * std::abs(y_[i]);
    const double df = (k2_[i] - k1_[i]) / sc;
    d2 += df * df;
  }
  d2 = std::sqrt(d2 / static_cast<double>(dim_)) / h0;
  const double dmax = std::max(d1, d2);
  double h1 = (dmax <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                              : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, settings_.max_step});
}

double Dopri5::step(double tau_limit) {
  if (!started_) throw std::logic_error("Dopri5::step before start");
  if (!(tau_limit > tau_)) throw std::logic_error("Dopri5::step: tau_limit must exceed time()");

  if (h_ <= 0.0) h_ = pick_initial_step(tau_limit);
  double facmax = kFacMax;

  for (;;) {
    if (stats_.accepted + stats_.rejected >= settings_.max_steps)
      throw std::runtime_error("Dopri5: step budget exhausted");

    const double h_natural = std::min(h_, settings_.max_step);
    double h = h_natural;
    bool hit_limit = false;
    if (tau_ + h >= tau_limit) {
      h = tau_limit - tau_;
      hit_limit = true;
    }
    if (!(h > std::abs(tau_) * 1e-15) || !(tau_ + h > tau_)) throw StepSizeUnderflowError(tau_);

    // Stages 2..6.
    for (std::size_t i = 0; i < dim_; ++i) y_stage_[i] = y_[i] + h * a21 * k1_[i];
    eval(tau_ + c2 * h, y_stage_, k2_);
    for (std::size_t i = 0; i < dim_; ++i)
      y_stage_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    eval(tau_ + c3 * h, y_stage_, k3_);
    for (std::size_t i = 0; i < dim_; ++i)
      y_stage_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    eval(tau_ + c4 * h, y_stage_, k4_);
    for (std::size_t i = 0; i < dim_; ++i)
      y_stage_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    eval(tau_ + c5 * h, y_stage_, k5_);
    for (std::size_t i = 0; i < dim_; ++i)
      y_stage_[i] =
          y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    eval(tau_ + h, y_stage_, k6_);

    // 5th order solution; its derivative is the FSAL stage.
    for (std::size_t i = 0; i < dim_; ++i)
      y_trial_[i] =
          y_[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
    eval(tau_ + h, y_trial_, k7_);

    double err = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                     e7 * k7_[i]);
      const double sc =
          settings_.abs_tol + settings_.rel_tol * std::max(std::abs(y_[i]), std::abs(y_trial_[i]));
      const double q = err_[i] / sc;
      err += q * q;
    }
    err = std::sqrt(err / static_cast<double>(dim_));

    if (err <= 1.0) {
      // Dense output coefficients for this step.
      for (std::size_t i = 0; i < dim_; ++i) {
        const double ydiff = y_trial_[i] - y_[i];
        const double bspl = h * k1_[i] - ydiff;
        rcont1_[i] = y_[i];
        rcont2_[i] = ydiff;
        rcont3_[i] = bspl;
        rcont4_[i] = ydiff - h * k7_[i] - bspl;
        rcont5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                          d7 * k7_[i]);
      }
      y_prev_.swap(y_);
      y_.swap(y_trial_);
      k1_.swap(k7_);
      tau_prev_ = tau_;
      tau_ = hit_limit ? tau_limit : tau_ + h;
      h_last_ = h;
      have_step_ = true;
      ++stats_.accepted;

      const double fac =
          (err == 0.0) ? facmax
                       : std::min(facmax, std::max(kFacMin, kSafety * std::pow(err, -0.2)));
      // A step clamped to an output boundary says nothing against the tuned
      // proposal, so never let it shrink one.
      h_ = hit_limit ? std::max(h_natural, h * fac) : h * fac;
      return tau_;
    }

    ++stats_.rejected;
    h_ = h * std::max(kFacMin, kSafety * std::pow(err, -0.2));
    facmax = 1.0;  // no growth right after a rejection
  }
}

void Dopri5::dense(double tau, std::span<double> out) const {
  if (!have_step_) throw std::logic_error("Dopri5::dense: no accepted step yet");
  const double theta = (tau - tau_prev_) / h_last_;
  const double theta1 = 1.0 - theta;
  for (std::size_t i = 0; i < dim_; ++i)
    out[i] = rcont1_[i] +
             theta * (rcont2_[i] + theta1 * (rcont3_[i] + theta * (rcont4_[i] + theta1 * rcont5_[i])));
}

double Dopri5::dense_component(double tau, std::size_t index) const {
  if (!have_step_) throw std::logic_error("Dopri5::dense: no accepted step yet");
  const double theta = (tau - tau_prev_) / h_last_;
  const double theta1 = 1.0 - theta;
  return rcont1_[index] +
         theta * (rcont2_[index] +
                  theta1 * (rcont3_[index] + theta * (rcont4_[index] + theta1 * rcont5_[index])));
}

}  // namespace rovib::ode
