#pragma once

// Coherent-state expectation of the Holstein-Primakoff square root,
//
//   F(rho, j) = e^{-rho^2} sum_{n=0}^{2j} rho^{2n}/n! sqrt(1 - n/2j),
//
// i.e. a Poisson(rho^2) average of sqrt(1 - n/2j) restricted to n <= 2j.  The
// coherent state keeps its full normalization e^{-rho^2}; components above
// n = 2j are annihilated, not renormalized away.

#include <cstdint>

#include "dicke/model.hpp"

namespace dicke {

/// Upper bound on the Poisson weight that the windowed evaluation may skip.
inline constexpr double kSeriesSkipTolerance = 1e-15;

struct SeriesEval {
  double value = 0.0;
  std::int64_t terms_used = 0;
  /// Rigorous upper bound on the Poisson mass inside [0, 2j] that was skipped.
  double truncated_mass = 0.0;
};

/// Windowed log-domain evaluation of F.  Cost is O(sqrt(rho^2)) terms.
SeriesEval eval_F_detailed(double rho, HalfInteger j);

double eval_F(double rho, HalfInteger j);

/// Full 0..2j summation in extended precision.  Reference path for tests;
/// O(2j) cost.
double eval_F_full(double rho, HalfInteger j);

/// Thermodynamic limit sqrt(1 - rho^2/2j).  Throws DomainError for
/// rho^2 > 2j (a few ulps of slack are clamped to zero).
double eval_F_limit(double rho, HalfInteger j);

/// max |F - F_limit| over a uniform grid of rho/sqrt(2j) in [0, 1].
double sup_deviation(HalfInteger j, int grid_points);

/// Single-threaded reference of sup_deviation.
double sup_deviation_serial(HalfInteger j, int grid_points);

}  // namespace dicke
