#include "rovib/matrix_elements.hpp"

#include <cmath>
#include <stdexcept>

namespace rovib::quantum {

int n_bound(const ModelParameters& params) {
  const double xe = params.anharmonicity_ratio();
  return static_cast<int>(std::floor(1.0 / (2.0 * xe) - 0.5));
}

double energy(int n, int l, const ModelParameters& params) {
  const double s = n + 0.5;
  return params.hbar_omega_e * s - params.hbar_xe_omega_e * s * s +
         params.beta * static_cast<double>(l) * (l + 1);
}

namespace {

// (l+m)! / (l-m)!, exact through 64-bit integers while the larger factorial
// stays below 21!, log-gamma beyond.
double factorial_ratio(int l, int m) {
  if (m >= 0) {
    if (l + m <= 20) {
      unsigned long long prod = 1;
      for (int j = l - m + 1; j <= l + m; ++j) prod *= static_cast<unsigned long long>(j);
      return static_cast<double>(prod);
    }
  } else {
    if (l - m <= 20) {
      unsigned long long prod = 1;
      for (int j = l + m + 1; j <= l - m; ++j) prod *= static_cast<unsigned long long>(j);
      return 1.0 / static_cast<double>(prod);
    }
  }
  return std::exp(std::lgamma(l + m + 1.0) - std::lgamma(l - m + 1.0));
}

}  // namespace

double clm(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw std::domain_error("clm: need l >= 0 and |m| <= l");
  return std::sqrt(2.0 * factorial_ratio(l, m) / (2.0 * l + 1.0));
}

double vib_sqrt_cos(int n_prime, int n) {
  if (n_prime < 0 || n < 0) return 0.0;
  if (n_prime == n - 1 || n_prime == n + 1) return 0.5 * std::sqrt(n_prime + 0.5);
  return 0.0;
}

double vib_cos_sqrt(int n_prime, int n) {
  if (n_prime < 0 || n < 0) return 0.0;
  if (n_prime == n - 1 || n_prime == n + 1) return 0.5 * std::sqrt(n + 0.5);
  return 0.0;
}

double vib_sqrt_sin_imag(int n_prime, int n) {
  if (n_prime < 0 || n < 0) return 0.0;
  if (n_prime == n + 1) return 0.5 * std::sqrt(n_prime + 0.5);
  if (n_prime == n - 1) return -0.5 * std::sqrt(n_prime + 0.5);
  return 0.0;
}

double vib_sin_sqrt_imag(int n_prime, int n) {
  if (n_prime < 0 || n < 0) return 0.0;
  if (n_prime == n + 1) return 0.5 * std::sqrt(n + 0.5);
  if (n_prime == n - 1) return -0.5 * std::sqrt(n + 0.5);
  return 0.0;
}

double vib_cos_sym(int n_prime, int n) { return vib_sqrt_cos(n_prime, n) + vib_cos_sqrt(n_prime, n); }

double vib_sin_sym_imag(int n_prime, int n) {
  return vib_sqrt_sin_imag(n_prime, n) + vib_sin_sqrt_imag(n_prime, n);
}

namespace {

void check_angular(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw std::domain_error("angular element: need l >= 0 and |m| <= l");
}

// Shared structure of the two angular elements: the m-raising and m-lowering
// ladder contributions.
struct AngularParts {
  double raising = 0.0;
  double lowering = 0.0;
};

AngularParts angular_parts(int l_prime, int m_prime, int l, int m) {
  AngularParts parts;
  if (m_prime == m + 1) {
    const double delta = (l_prime == l + 1 ? 1.0 : 0.0) - (l_prime == l - 1 ? 1.0 : 0.0);
    if (delta != 0.0) parts.raising = delta * clm(l_prime, m_prime) / (clm(l, m) * (2.0 * l + 1.0));
  }
  if (m_prime == m - 1) {
    const double delta = (l == l_prime + 1 ? 1.0 : 0.0) - (l == l_prime - 1 ? 1.0 : 0.0);
    if (delta != 0.0)
      parts.lowering = delta * clm(l, m) / (clm(l_prime, m_prime) * (2.0 * l_prime + 1.0));
  }
  return parts;
}

}  // namespace

std::complex<double> ang_sin_cos(int l_prime, int m_prime, int l, int m) {
  check_angular(l, m);
  check_angular(l_prime, m_prime);
  const AngularParts parts = angular_parts(l_prime, m_prime, l, m);
  return {0.5 * (parts.raising + parts.lowering), 0.0};
}

std::complex<double> ang_sin_sin(int l_prime, int m_prime, int l, int m) {
  check_angular(l, m);
  check_angular(l_prime, m_prime);
  const AngularParts parts = angular_parts(l_prime, m_prime, l, m);
  // 1/(2i) times (raising - lowering).
  return {0.0, -0.5 * (parts.raising - parts.lowering)};
}

}  // namespace rovib::quantum
