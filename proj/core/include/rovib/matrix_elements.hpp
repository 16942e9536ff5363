#pragma once

#include <complex>

#include "rovib/params.hpp"

namespace rovib::quantum {

// Highest vibrational level with a positive ladder spacing,
// floor(1/(2 xe) - 1/2) with xe the anharmonicity ratio. The spectrum is
// finite; no basis may extend past this.
int n_bound(const ModelParameters& params);

// Level energy in code units, independent of m (each l level is (2l+1)-fold
// degenerate).
double energy(int n, int l, const ModelParameters& params);

// Angular normalisation coefficient sqrt(2 (l+m)! / ((2l+1) (l-m)!)). Uses
// exact integer factorial ratios while they fit, log-gamma beyond. Throws
// std::domain_error when |m| > l.
double clm(int l, int m);

// Vibrational factors of the drive. The phase-shift operators act as pure
// ladder shifts, so each element is a single square root times Kronecker
// deltas on n' = n +- 1.
//
//   <n'| sqrt(nhat + 1/2) cos(phase) |n>  -> vib_sqrt_cos (real)
//   <n'| cos(phase) sqrt(nhat + 1/2) |n>  -> vib_cos_sqrt (real)
//
// The sin counterparts are purely imaginary; the functions return the real
// factor r with element = -i * r.
double vib_sqrt_cos(int n_prime, int n);
double vib_cos_sqrt(int n_prime, int n);
double vib_sqrt_sin_imag(int n_prime, int n);
double vib_sin_sqrt_imag(int n_prime, int n);

// Symmetrised combinations entering the drive matrix.
double vib_cos_sym(int n_prime, int n);       // sum of the two cos orderings
double vib_sin_sym_imag(int n_prime, int n);  // sum of the two sin orderings, element = -i * r

// Angular dipole elements <l'm'| sin(theta) cos(phi) |lm> and the sin(phi)
// counterpart. Zero outside the selection rules l' = l +- 1, m' = m +- 1.
// Throws std::domain_error on invalid quantum numbers.
std::complex<double> ang_sin_cos(int l_prime, int m_prime, int l, int m);
std::complex<double> ang_sin_sin(int l_prime, int m_prime, int l, int m);

}  // namespace rovib::quantum
