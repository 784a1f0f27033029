#pragma once

// Variational energy <alpha beta| H_HP |alpha beta> of the Holstein-Primakoff
// Dicke Hamiltonian, finite-j and thermodynamic-limit forms.

#include <algorithm>
#include <cmath>

#include "dicke/model.hpp"

namespace dicke {

struct GradientVector {
  double d_rho_a = 0.0;
  double d_phi_a = 0.0;
  double d_rho_b = 0.0;
  double d_phi_b = 0.0;

  double max_abs() const {
    return std::max({std::abs(d_rho_a), std::abs(d_phi_a), std::abs(d_rho_b), std::abs(d_phi_b)});
  }
};

/// rho_a^2 + (rho_b^2 - j) omega_a + 4 gamma rho_a rho_b cos(phi_a) cos(phi_b) F(rho_b, j)
double energy_finite_j(const ModelParams& params, const VariationalPoint& pt);

/// Same surface with F replaced by sqrt(1 - rho_b^2/2j).  Requires rho_b^2 <= 2j.
double energy_thermo(const ModelParams& params, const VariationalPoint& pt);

/// Exact partial derivatives of energy_thermo.  Requires rho_b^2 < 2j.
GradientVector gradient_thermo(const ModelParams& params, const VariationalPoint& pt);

}  // namespace dicke
