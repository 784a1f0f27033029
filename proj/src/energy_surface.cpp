#include "dicke/energy_surface.hpp"

#include "dicke/hp_series.hpp"

namespace dicke {

double energy_finite_j(const ModelParams& params, const VariationalPoint& pt) {
  params.validate();
  const double j = params.j.value();
  const double coupling = 4.0 * params.gamma * pt.rho_a * pt.rho_b * std::cos(pt.phi_a) *
                          std::cos(pt.phi_b);
  // F multiplies a factor that vanishes with rho_a; skip the series then.
  const double series = coupling == 0.0 ? 0.0 : eval_F(pt.rho_b, params.j);
  return pt.rho_a * pt.rho_a + (pt.rho_b * pt.rho_b - j) * params.omega_a + coupling * series;
}

double energy_thermo(const ModelParams& params, const VariationalPoint& pt) {
  params.validate();
  const double j = params.j.value();
  const double root = eval_F_limit(pt.rho_b, params.j);
  return pt.rho_a * pt.rho_a + (pt.rho_b * pt.rho_b - j) * params.omega_a +
         4.0 * params.gamma * pt.rho_a * pt.rho_b * root * std::cos(pt.phi_a) * std::cos(pt.phi_b);
}

GradientVector gradient_thermo(const ModelParams& params, const VariationalPoint& pt) {
  params.validate();
  const double j = params.j.value();
  const double radicand = 1.0 - pt.rho_b * pt.rho_b / (2.0 * j);
  if (!(radicand > 0.0)) {
    throw DomainError("thermodynamic gradient undefined for rho_b^2 >= 2j");
  }
  const double root = std::sqrt(radicand);
  const double ca = std::cos(pt.phi_a), sa = std::sin(pt.phi_a);
  const double cb = std::cos(pt.phi_b), sb = std::sin(pt.phi_b);
  const double g4 = 4.0 * params.gamma;

  GradientVector g;
  g.d_rho_a = 2.0 * pt.rho_a + g4 * pt.rho_b * root * ca * cb;
  g.d_phi_a = -g4 * pt.rho_a * pt.rho_b * root * sa * cb;
  g.d_rho_b = 2.0 * pt.rho_b * params.omega_a +
              g4 * pt.rho_a * ca * cb * (1.0 - pt.rho_b * pt.rho_b / j) / root;
  g.d_phi_b = -g4 * pt.rho_a * pt.rho_b * root * ca * sb;
  return g;
}

}  // namespace dicke
