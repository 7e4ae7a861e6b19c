#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tcsim {

/// Dimensionless parameters of the driven transmon-cavity model in the frame
/// rotating at the drive frequency. Every frequency is in units of the
/// reference frequency, so the time axis is omega*t.
struct SystemParams {
  double omega_a = 1.0;  ///< cavity detuning from the drive
  double omega_b = 1.0;  ///< qubit detuning from the drive
  double g = 1.0;        ///< cavity-qubit coupling
  double drive_e = 0.1;  ///< cavity drive amplitude E
  double gamma_s = 0.005;  ///< cavity photon loss rate
  double e_c = 0.0;      ///< anharmonicity (only the Fock oracle uses it)

  /// Throws std::invalid_argument on non-finite fields or negative loss.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

/// Circuit-level inputs for the conversion helpers. SI units.
struct CircuitParams {
  double omega_r;     ///< cavity angular frequency [rad/s]
  double omega_q;     ///< qubit angular frequency [rad/s]
  double omega_0;     ///< drive angular frequency [rad/s]
  double c_ratio;     ///< C_g / C_sigma
  double ej_over_ec;  ///< E_J / E_C, > 1 in the transmon regime
  double z_r;         ///< resonator impedance [ohm]
  double r_k;         ///< resistance quantum [ohm]
  double power;       ///< input drive power [W]
  double hbar;        ///< reduced Planck constant [J s]

  /// Throws std::invalid_argument unless every field is finite and strictly
  /// positive and ej_over_ec > 1.
  void validate() const;
};

struct Detunings {
  double omega_a;
  double omega_b;
};

/// (omega_r - omega_0, omega_q - omega_0).
Detunings detunings(const CircuitParams& circuit);

/// g = omega_r (C_g/C_sigma) (E_J / 2 E_C)^(1/4) sqrt(pi Z_r / R_k).
double coupling_from_circuit(const CircuitParams& circuit);

/// E = sqrt(2 P / (hbar omega_0)).
double drive_from_power(const CircuitParams& circuit);

}  // namespace tcsim
