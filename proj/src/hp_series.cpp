#include "dicke/hp_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dicke {

namespace {

using ld = long double;

// Relative size of the geometric tail bound at which a side of the window stops.
constexpr double kTailStop = 1e-18;

// log(n!) - [(n + 1/2) log n - n + log sqrt(2 pi)], n >= 1.
ld stirling_error(std::int64_t n) {
  constexpr ld log_sqrt_2pi = 0.918938533204672741780329736405617639861L;
  const ld x = static_cast<ld>(n);
  if (n < 16) {
    return std::lgamma(x + 1.0L) - (x + 0.5L) * std::log(x) + x - log_sqrt_2pi;
  }
  constexpr ld s0 = 1.0L / 12.0L, s1 = 1.0L / 360.0L, s2 = 1.0L / 1260.0L,
               s3 = 1.0L / 1680.0L, s4 = 1.0L / 1188.0L;
  const ld n1 = 1.0L / x;
  const ld n2 = n1 * n1;
  return (s0 - (s1 - (s2 - (s3 - s4 * n2) * n2) * n2) * n2) * n1;
}

// x log(x/mu) + mu - x without cancellation near x = mu.
ld deviance_term(ld x, ld mu) {
  if (std::abs(x - mu) < 0.1L * (x + mu)) {
    const ld v = (x - mu) / (x + mu);
    ld s = (x - mu) * v;
    ld ej = 2.0L * x * v;
    for (int k = 1; k < 1000; ++k) {
      ej *= v * v;
      const ld s1 = s + ej / static_cast<ld>(2 * k + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / mu) + mu - x;
}

// log of the Poisson(mu) probability of n.
ld log_poisson(std::int64_t n, ld mu) {
  if (n == 0) return -mu;
  constexpr ld two_pi = 2.0L * std::numbers::pi_v<long double>;
  const ld x = static_cast<ld>(n);
  return -stirling_error(n) - deviance_term(x, mu) - 0.5L * std::log(two_pi * x);
}

void check_rho(double rho) {
  if (!std::isfinite(rho) || rho < 0.0) {
    throw DomainError("rho must be finite and >= 0 (got " + std::to_string(rho) + ")");
  }
}

}  // namespace

SeriesEval eval_F_detailed(double rho, HalfInteger j) {
  check_rho(rho);
  const std::int64_t top = j.twice();
  const ld lambda = static_cast<ld>(rho) * static_cast<ld>(rho);
  if (lambda == 0.0L) return {1.0, 1, 0.0};

  const ld two_j = static_cast<ld>(top);
  // sqrt(1 - n/2j), exactly zero at n = 2j.
  auto root = [&](std::int64_t n) -> ld {
    return std::sqrt(static_cast<ld>(top - n) / two_j);
  };

  const auto floor_lambda = static_cast<std::int64_t>(std::floor(lambda));
  const std::int64_t mode = std::min(floor_lambda, top);
  const ld log_lambda = std::log(lambda);
  const ld log_anchor = log_poisson(mode, lambda);

  // Everything in [0, 2j] underflows.
  if (log_anchor + std::log(two_j + 1.0L) < -745.0L) {
    return {0.0, 1, 0.0};
  }

  SeriesEval out;
  ld sum = std::exp(log_anchor) * root(mode);
  out.terms_used = 1;
  ld skipped = 0.0L;

  // Upward from the anchor: t_{n+1} = t_n * lambda / (n + 1).
  ld log_t = log_anchor;
  for (std::int64_t n = mode + 1; n <= top; ++n) {
    log_t += log_lambda - std::log(static_cast<ld>(n));
    const ld t = std::exp(log_t);
    sum += t * root(n);
    ++out.terms_used;
    const ld ratio = lambda / static_cast<ld>(n + 1);
    if (n < top && ratio < 1.0L) {
      const ld tail = t * ratio / (1.0L - ratio);
      if (tail <= kTailStop * sum) {
        skipped += tail;
        break;
      }
    }
  }

  // Downward: t_{n-1} = t_n * n / lambda.
  log_t = log_anchor;
  for (std::int64_t n = mode - 1; n >= 0; --n) {
    log_t += std::log(static_cast<ld>(n + 1)) - log_lambda;
    const ld t = std::exp(log_t);
    sum += t * root(n);
    ++out.terms_used;
    const ld ratio = static_cast<ld>(n) / lambda;
    if (n > 0 && ratio < 1.0L) {
      const ld tail = t * ratio / (1.0L - ratio);
      if (tail <= kTailStop * sum) {
        skipped += tail;
        break;
      }
    }
  }

  out.value = static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
  out.truncated_mass = static_cast<double>(skipped);
  return out;
}

double eval_F(double rho, HalfInteger j) { return eval_F_detailed(rho, j).value; }

double eval_F_full(double rho, HalfInteger j) {
  check_rho(rho);
  const std::int64_t top = j.twice();
  const ld lambda = static_cast<ld>(rho) * static_cast<ld>(rho);
  if (lambda == 0.0L) return 1.0;
  const ld log_lambda = std::log(lambda);
  const ld two_j = static_cast<ld>(top);
  ld sum = 0.0L;
  for (std::int64_t n = 0; n <= top; ++n) {
    const ld x = static_cast<ld>(n);
    const ld log_t = -lambda + x * log_lambda - std::lgamma(x + 1.0L);
    sum += std::exp(log_t) * std::sqrt(static_cast<ld>(top - n) / two_j);
  }
  return static_cast<double>(sum);
}

double eval_F_limit(double rho, HalfInteger j) {
  check_rho(rho);
  const double ratio = rho * rho / j.atoms();
  if (ratio > 1.0 + 8.0 * std::numeric_limits<double>::epsilon()) {
    throw DomainError("F limit undefined for rho^2 > 2j");
  }
  return std::sqrt(std::max(0.0, 1.0 - ratio));
}

namespace {

double grid_deviation(HalfInteger j, int i, int grid_points) {
  const double x = static_cast<double>(i) / static_cast<double>(grid_points - 1);
  const double rho = x * std::sqrt(j.atoms());
  const double limit = std::sqrt(std::max(0.0, 1.0 - x * x));
  return std::abs(eval_F(rho, j) - limit);
}

void check_grid(int grid_points) {
  if (grid_points < 2) throw DomainError("grid_points must be >= 2");
}

}  // namespace

double sup_deviation(HalfInteger j, int grid_points) {
  check_grid(grid_points);
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (int i = 0; i < grid_points; ++i) {
    worst = std::max(worst, grid_deviation(j, i, grid_points));
  }
  return worst;
}

double sup_deviation_serial(HalfInteger j, int grid_points) {
  check_grid(grid_points);
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    worst = std::max(worst, grid_deviation(j, i, grid_points));
  }
  return worst;
}

}  // namespace dicke
