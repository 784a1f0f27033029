#pragma once

// Mean-field ground state of the Dicke model: closed-form thermodynamic-limit
// minima, a numerical minimizer for the finite-j surface, and the intensive
// observables derived from either.

#include <string_view>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

enum class Phase { Normal, Superradiant };
enum class SolveMethod { AnalyticThermo, NumericFiniteJ };

std::string_view to_string(Phase phase);
std::string_view to_string(SolveMethod method);

/// Intensive quantities, all per atom (N = 2j).
struct Observables {
  double energy_per_atom = 0.0;
  double photons_per_atom = 0.0;
  double excited_fraction = 0.0;
};

struct MeanFieldSolution {
  VariationalPoint point;
  double energy = 0.0;
  Phase phase = Phase::Normal;
  double energy_per_atom = 0.0;
  double photons_per_atom = 0.0;
  double excited_fraction = 0.0;
  SolveMethod method = SolveMethod::AnalyticThermo;
};

struct MinimizerOptions {
  /// Coarse scan points on rho_b in [0, sqrt(2j)].
  int grid_points = 512;
  /// Slack allowed when checking that the refined point is not above the bracket ends.
  double bracket_tolerance = 1e-12;
  /// Relative tolerance on rho_b for the Brent refinement.
  double convergence_tolerance = 1e-8;
  int max_iterations = 200;

  void validate() const;
};

/// sqrt(omega_a) / 2.
double critical_coupling(double omega_a);

/// Closed-form minimum of the thermodynamic-limit surface.  Normal phase for
/// gamma < gamma_c (phases canonicalized to 0), superradiant with
/// (phi_a, phi_b) = (0, pi) for gamma >= gamma_c.
MeanFieldSolution analytic_minimum(const ModelParams& params);

/// Reduced finite-j profile with rho_a eliminated at its stationary value
/// rho_a = 2 gamma rho_b F(rho_b, j) and cos(phi_a) cos(phi_b) = -1:
///   E_red(rho_b) = -4 gamma^2 rho_b^2 F^2 + omega_a rho_b^2 - j omega_a.
double reduced_energy(const ModelParams& params, double rho_b);

/// E_red on a uniform grid over [0, rho_max].  Parallel kernel.
std::vector<double> scan_reduced_energy(const ModelParams& params, double rho_max, int points);
/// Single-threaded reference of scan_reduced_energy.
std::vector<double> scan_reduced_energy_serial(const ModelParams& params, double rho_max,
                                               int points);

/// Global minimum of the finite-j surface: grid scan, then bracketed Brent
/// refinement.  Throws NonConvergence when the refinement misbehaves.
MeanFieldSolution numeric_minimum(const ModelParams& params, const MinimizerOptions& opts = {});

/// (E/2j, rho_a^2/2j, rho_b^2/2j).
Observables observables(const MeanFieldSolution& sol, const ModelParams& params);

}  // namespace dicke
