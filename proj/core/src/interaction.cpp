#include "rovib/interaction.hpp"

#include <cmath>
#include <stdexcept>

#include "rovib/matrix_elements.hpp"

namespace rovib::quantum {

double coupling_amplitude(const StateIndex& upper, const StateIndex& lower,
                          const ModelParameters& params) {
  if (upper.n != lower.n + 1 || upper.m != lower.m + 1 || std::abs(upper.l - lower.l) != 1)
    throw std::domain_error("coupling_amplitude: pair violates the selection rules");
  const double s = std::sqrt(lower.n + 0.5) + std::sqrt(upper.n + 0.5);
  const double delta_l = (upper.l == lower.l + 1) ? 1.0 : -1.0;
  return -0.25 * params.W * s * delta_l * clm(upper.l, upper.m) /
         (clm(lower.l, lower.m) * (2.0 * lower.l + 1.0));
}

namespace {

// Allowed raised partners of one state.
std::array<StateIndex, 2> raised_partners(const StateIndex& s) {
  return {StateIndex{s.n + 1, s.l + 1, s.m + 1}, StateIndex{s.n + 1, s.l - 1, s.m + 1}};
}

bool valid_state(const StateIndex& s) { return s.n >= 0 && s.l >= 0 && std::abs(s.m) <= s.l; }

}  // namespace

InteractionMatrix interaction_matrix(const Basis& basis, const ModelParameters& params,
                                     double tau) {
  InteractionMatrix matrix{ComplexMatrix(basis.size()), tau};
  const double omega = params.drive_frequency();
  const std::complex<double> raise_phase = std::polar(1.0, -omega * tau);
  for (std::size_t lo = 0; lo < basis.size(); ++lo) {
    for (const StateIndex& up_idx : raised_partners(basis.state(lo))) {
      if (!valid_state(up_idx)) continue;
      const auto up = basis.find(up_idx);
      if (!up) continue;
      const double amp = coupling_amplitude(up_idx, basis.state(lo), params);
      matrix.entries.at(*up, lo) = amp * raise_phase;
      matrix.entries.at(lo, *up) = amp * std::conj(raise_phase);
    }
  }
  return matrix;
}

void write_matrix_coordinate_list(const InteractionMatrix& matrix, std::ostream& out) {
  char line[128];
  for (std::size_t r = 0; r < matrix.entries.dim(); ++r)
    for (std::size_t c = 0; c < matrix.entries.dim(); ++c) {
      const std::complex<double> v = matrix.entries.at(r, c);
      if (v == std::complex<double>(0.0, 0.0)) continue;
      std::snprintf(line, sizeof(line), "%zu %zu %.17g %.17g\n", r, c, v.real(), v.imag());
      out << line;
    }
}

CouplingTable::CouplingTable(const Basis& basis, const ModelParameters& params)
    : dim_(basis.size()) {
  const double omega = params.drive_frequency();
  for (std::size_t lo = 0; lo < basis.size(); ++lo) {
    for (const StateIndex& up_idx : raised_partners(basis.state(lo))) {
      if (!valid_state(up_idx)) continue;
      const auto up = basis.find(up_idx);
      if (!up) continue;
      Coupling c;
      c.upper = *up;
      c.lower = lo;
      c.amplitude = coupling_amplitude(up_idx, basis.state(lo), params);
      c.freq = energy(up_idx.n, up_idx.l, params) -
               energy(basis.state(lo).n, basis.state(lo).l, params) - omega;
      couplings_.push_back(c);
    }
  }
}

void CouplingTable::apply(double tau, std::span<const std::complex<double>> d,
                          std::span<std::complex<double>> out) const {
  if (d.size() != dim_ || out.size() != dim_)
    throw std::invalid_argument("CouplingTable::apply: dimension mismatch");
  std::fill(out.begin(), out.end(), std::complex<double>(0.0, 0.0));
  for (const Coupling& c : couplings_) {
    const double arg = c.freq * tau;
    const double co = std::cos(arg);
    const double si = std::sin(arg);
    // -i * exp(+i arg) and -i * exp(-i arg), scaled by the amplitude.
    const std::complex<double> w_up(c.amplitude * si, -c.amplitude * co);
    const std::complex<double> w_lo(-c.amplitude * si, -c.amplitude * co);
    out[c.upper] += w_up * d[c.lower];
    out[c.lower] += w_lo * d[c.upper];
  }
}

}  // namespace rovib::quantum
