#include "tcsim/model.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace tcsim {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("{} must be finite, got {}", name, v));
  }
}

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::invalid_argument(fmt::format("{} must be finite and > 0, got {}", name, v));
  }
}

}  // namespace

void SystemParams::validate() const {
  require_finite(omega_a, "omega_a");
  require_finite(omega_b, "omega_b");
  require_finite(g, "g");
  require_finite(drive_e, "drive_e");
  require_finite(gamma_s, "gamma_s");
  require_finite(e_c, "e_c");
  if (gamma_s < 0.0) {
    throw std::invalid_argument(fmt::format("gamma_s must be >= 0, got {}", gamma_s));
  }
}

void CircuitParams::validate() const {
  require_positive(omega_r, "omega_r");
  require_positive(omega_q, "omega_q");
  require_positive(omega_0, "omega_0");
  require_positive(c_ratio, "c_ratio");
  require_positive(ej_over_ec, "ej_over_ec");
  require_positive(z_r, "z_r");
  require_positive(r_k, "r_k");
  require_positive(power, "power");
  require_positive(hbar, "hbar");
  if (ej_over_ec <= 1.0) {
    throw std::invalid_argument(
        fmt::format("ej_over_ec must exceed 1 (transmon regime), got {}", ej_over_ec));
  }
}

Detunings detunings(const CircuitParams& circuit) {
  circuit.validate();
  return {circuit.omega_r - circuit.omega_0, circuit.omega_q - circuit.omega_0};
}

double coupling_from_circuit(const CircuitParams& circuit) {
  circuit.validate();
  return circuit.omega_r * circuit.c_ratio * std::pow(circuit.ej_over_ec / 2.0, 0.25) *
         std::sqrt(std::numbers::pi * circuit.z_r / circuit.r_k);
}

double drive_from_power(const CircuitParams& circuit) {
  circuit.validate();
  return std::sqrt(2.0 * circuit.power / (circuit.hbar * circuit.omega_0));
}

}  // namespace tcsim
