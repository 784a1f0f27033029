#include "dicke/variational_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "dicke/energy_surface.hpp"
#include "dicke/hp_series.hpp"

namespace dicke {

std::string_view to_string(Phase phase) {
  return phase == Phase::Normal ? "Normal" : "Superradiant";
}

std::string_view to_string(SolveMethod method) {
  return method == SolveMethod::AnalyticThermo ? "AnalyticThermo" : "NumericFiniteJ";
}

void MinimizerOptions::validate() const {
  if (grid_points < 3) throw DomainError("minimizer grid_points must be >= 3");
  if (!(bracket_tolerance >= 0.0)) throw DomainError("bracket_tolerance must be >= 0");
  if (!(convergence_tolerance > 0.0 && convergence_tolerance < 1.0)) {
    throw DomainError("convergence_tolerance must lie in (0, 1)");
  }
  if (max_iterations < 1) throw DomainError("max_iterations must be >= 1");
}

double critical_coupling(double omega_a) {
  if (!std::isfinite(omega_a) || omega_a < 0.0) {
    throw DomainError("omega_a must be finite and >= 0");
  }
  return std::sqrt(omega_a) / 2.0;
}

namespace {

void fill_observables(MeanFieldSolution& sol, const ModelParams& params) {
  const Observables obs = observables(sol, params);
  sol.energy_per_atom = obs.energy_per_atom;
  sol.photons_per_atom = obs.photons_per_atom;
  sol.excited_fraction = obs.excited_fraction;
}

}  // namespace

MeanFieldSolution analytic_minimum(const ModelParams& params) {
  params.validate();
  const double j = params.j.value();
  const double gamma_c = critical_coupling(params.omega_a);

  MeanFieldSolution sol;
  sol.method = SolveMethod::AnalyticThermo;
  if (params.gamma < gamma_c) {
    sol.phase = Phase::Normal;
    sol.point = {};
  } else {
    sol.phase = Phase::Superradiant;
    // Both radicands vanish at gamma == gamma_c (this also covers gamma_c == 0 == gamma).
    if (params.gamma > gamma_c) {
      const double q = (gamma_c / params.gamma) * (gamma_c / params.gamma);
      sol.point.rho_a = params.gamma * std::sqrt(2.0 * j) * std::sqrt(1.0 - q * q);
      sol.point.rho_b = std::sqrt(j) * std::sqrt(1.0 - q);
    }
    sol.point.phi_a = 0.0;
    sol.point.phi_b = std::numbers::pi;
  }
  sol.energy = energy_thermo(params, sol.point);
  fill_observables(sol, params);
  return sol;
}

double reduced_energy(const ModelParams& params, double rho_b) {
  const double j = params.j.value();
  const double x = rho_b * rho_b;
  if (x == 0.0) return -j * params.omega_a;
  const double f = eval_F(rho_b, params.j);
  const double g2 = params.gamma * params.gamma;
  return -4.0 * g2 * x * f * f + params.omega_a * x - j * params.omega_a;
}

namespace {

double grid_rho(double rho_max, int i, int points) {
  return rho_max * static_cast<double>(i) / static_cast<double>(points - 1);
}

}  // namespace

std::vector<double> scan_reduced_energy(const ModelParams& params, double rho_max, int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = reduced_energy(params, grid_rho(rho_max, i, points));
  }
  return out;
}

std::vector<double> scan_reduced_energy_serial(const ModelParams& params, double rho_max,
                                               int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] = reduced_energy(params, grid_rho(rho_max, i, points));
  }
  return out;
}

MeanFieldSolution numeric_minimum(const ModelParams& params, const MinimizerOptions& opts) {
  params.validate();
  opts.validate();
  const double rho_max = std::sqrt(params.j.atoms());
  const int points = opts.grid_points;

  const std::vector<double> profile = scan_reduced_energy(params, rho_max, points);
  const auto best_it = std::min_element(profile.begin(), profile.end());
  const int best = static_cast<int>(best_it - profile.begin());

  double rho_b = grid_rho(rho_max, best, points);
  double e_best = *best_it;

  if (params.gamma > 0.0) {
    const double lo = grid_rho(rho_max, std::max(best - 1, 0), points);
    const double hi = grid_rho(rho_max, std::min(best + 1, points - 1), points);
    const int bits = std::clamp(
        static_cast<int>(std::ceil(-std::log2(opts.convergence_tolerance))), 4,
        std::numeric_limits<double>::digits / 2);
    std::uintmax_t iterations = static_cast<std::uintmax_t>(opts.max_iterations);
    const auto [x, fx] = boost::math::tools::brent_find_minima(
        [&](double r) { return reduced_energy(params, r); }, lo, hi, bits, iterations);
    if (iterations >= static_cast<std::uintmax_t>(opts.max_iterations)) {
      throw NonConvergence("finite-j refinement did not converge within " +
                           std::to_string(opts.max_iterations) + " iterations");
    }
    const double e_lo = profile[static_cast<std::size_t>(std::max(best - 1, 0))];
    const double e_hi = profile[static_cast<std::size_t>(std::min(best + 1, points - 1))];
    if (fx > std::max(e_lo, e_hi) + opts.bracket_tolerance) {
      throw NonConvergence("finite-j refinement left its bracket");
    }
    if (fx < e_best) {
      rho_b = x;
      e_best = fx;
    }
  }
  // The origin wins ties so sub-threshold couplings report exact zeros.
  if (profile.front() <= e_best) {
    rho_b = 0.0;
    e_best = profile.front();
  }
  if (rho_b < rho_max && profile.back() < e_best) {
    throw NonConvergence("finite-j profile is not increasing toward rho_b = sqrt(2j)");
  }

  MeanFieldSolution sol;
  sol.method = SolveMethod::NumericFiniteJ;
  if (rho_b == 0.0) {
    sol.phase = Phase::Normal;
    sol.point = {};
  } else {
    sol.phase = Phase::Superradiant;
    const double rho_a = 2.0 * params.gamma * rho_b * eval_F(rho_b, params.j);
    sol.point = {rho_a, 0.0, rho_b, std::numbers::pi};
  }
  sol.energy = energy_finite_j(params, sol.point);
  fill_observables(sol, params);
  return sol;
}

Observables observables(const MeanFieldSolution& sol, const ModelParams& params) {
  const double atoms = params.j.atoms();
  return {sol.energy / atoms, sol.point.rho_a * sol.point.rho_a / atoms,
          sol.point.rho_b * sol.point.rho_b / atoms};
}

}  // namespace dicke
