#pragma once

#include <complex>
#include <ostream>
#include <span>
#include <vector>

#include "rovib/basis.hpp"
#include "rovib/params.hpp"

namespace rovib::quantum {

// Small dense complex matrix; row-major, fixed square dimension.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  std::size_t dim() const { return dim_; }
  std::complex<double>& at(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const std::complex<double>& at(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  std::span<const std::complex<double>> data() const { return data_; }

 private:
  std::size_t dim_;
  std::vector<std::complex<double>> data_;
};

struct InteractionMatrix {
  ComplexMatrix entries;
  double tau = 0.0;
};

// Drive matrix at time tau in the stationary basis: Hermitian, nonzero only
// on (dn, dm) = +-(1, 1) with dl = +-1, so it never couples different
// m - n classes. The raising entries carry the phase exp(-i*omega*tau), the
// lowering entries its conjugate.
InteractionMatrix interaction_matrix(const Basis& basis, const ModelParameters& params, double tau);

// Coordinate-list dump "row col re im" for the nonzero entries.
void write_matrix_coordinate_list(const InteractionMatrix& matrix, std::ostream& out);

// One drive-coupled ordered pair; "upper" is the state with n and m raised
// by one relative to "lower".
struct Coupling {
  std::size_t upper = 0;
  std::size_t lower = 0;
  double amplitude = 0.0;  // real drive coefficient, proportional to W
  double freq = 0.0;       // E(upper) - E(lower) - drive frequency, code units
};

// Precomputed coupling network of a basis; immutable once built. In the
// interaction picture each pair contributes amplitude * exp(+i*freq*tau) at
// (upper, lower) and the conjugate at (lower, upper).
class CouplingTable {
 public:
  CouplingTable(const Basis& basis, const ModelParameters& params);

  // out = dD/dtau for the interaction-picture coefficient equations.
  void apply(double tau, std::span<const std::complex<double>> d,
             std::span<std::complex<double>> out) const;

  const std::vector<Coupling>& couplings() const { return couplings_; }
  std::size_t dimension() const { return dim_; }

 private:
  std::vector<Coupling> couplings_;
  std::size_t dim_ = 0;
};

// Signed amplitude of the (upper, lower) drive entry for one allowed pair;
// the building block shared by interaction_matrix and CouplingTable.
double coupling_amplitude(const StateIndex& upper, const StateIndex& lower,
                          const ModelParameters& params);

}  // namespace rovib::quantum
