#pragma once

#include <filesystem>
#include <string>

namespace rovib {

// Physical constants of the molecule and the drive, in spectroscopic units
// (cm^-1, Debye, amu, Angstrom).
//
// All dynamics run in code units where the reference energy hbar*Omega is
// 1 cm^-1 and hbar = 1, so energies in cm^-1 pass through numerically
// unchanged and the independent variable is the dimensionless time
// tau = Omega * t. The dipole moment d0, bond length r0 and reduced mass mu
// document where the drive strength W comes from; the equations of motion
// consume W directly.
struct ModelParameters {
  double hbar_omega_e = 0.0;     // vibrational quantum, cm^-1
  double hbar_detuning = 0.0;    // hbar*(omega_e - omega), cm^-1
  double hbar_xe_omega_e = 0.0;  // anharmonic correction, cm^-1
  double beta = 0.0;             // rotational constant hbar^2/(2 mu r0^2), cm^-1
  double W = 0.0;                // drive strength, cm^-1
  double d0 = 0.0;               // permanent dipole moment, Debye
  double r0 = 0.0;               // equilibrium bond length, Angstrom
  double mu = 0.0;               // reduced mass, amu
  int k = 0;                     // conserved rotation/vibration imbalance

  // Drive frequency in code units; tied to the detuning so the resonance
  // offset is exactly hbar_detuning.
  double drive_frequency() const { return hbar_omega_e - hbar_detuning; }

  double anharmonicity_ratio() const { return hbar_xe_omega_e / hbar_omega_e; }
};

// Explicit home for the code-unit convention. energy_scale_cm1 is 1 cm^-1,
// so to_code is numerically the identity; it exists so the convention is
// stated once instead of implied everywhere.
struct CodeUnits {
  double energy_scale_cm1 = 1.0;
  double to_code(double energy_cm1) const { return energy_cm1 / energy_scale_cm1; }
};

// GeO driven slightly below the vibrational resonance. W is left at zero;
// every experiment supplies its own drive strength.
ModelParameters geo_preset();

// Returns params unchanged when all invariants hold, otherwise throws
// ConfigError naming the first violated invariant.
ModelParameters validate(const ModelParameters& params);

// JSON config format: a flat object with exactly the field names above,
// energies in cm^-1. Unknown keys are rejected.
std::string params_to_json(const ModelParameters& params);
ModelParameters params_from_json(const std::string& text);
ModelParameters params_from_json_file(const std::filesystem::path& file);
void params_to_json_file(const ModelParameters& params, const std::filesystem::path& file);

}  // namespace rovib
