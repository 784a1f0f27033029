#pragma once

// Parameter and coordinate types shared by every module.
//
// Units: energies in units of the field quantum (hbar * omega_F); omega_a and
// gamma are dimensionless ratios to the field frequency.  j = N/2 where N is
// the number of two-level atoms.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dicke {

/// Raised when an input lies outside the domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative procedure fails to reach its tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A positive half-integer stored as twice its value, so that j = 1/2, 1, ...
/// are represented exactly.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static HalfInteger from_twice(std::int64_t twice);
  /// Accepts doubles within 1e-9 of a positive half-integer.
  static HalfInteger from_double(double value);

  constexpr std::int64_t twice() const { return twice_; }
  constexpr double value() const { return static_cast<double>(twice_) / 2.0; }
  /// Number of atoms N = 2j.
  constexpr double atoms() const { return static_cast<double>(twice_); }

  friend constexpr bool operator==(HalfInteger, HalfInteger) = default;

 private:
  constexpr explicit HalfInteger(std::int64_t twice) : twice_(twice) {}
  std::int64_t twice_ = 1;
};

struct ModelParams {
  double omega_a = 1.0;
  double gamma = 0.0;
  HalfInteger j;

  /// Throws DomainError unless omega_a >= 0 and gamma >= 0 (both finite).
  void validate() const;
};

/// Coherent-state amplitudes alpha = rho_a e^{i phi_a}, beta = rho_b e^{i phi_b}.
struct VariationalPoint {
  double rho_a = 0.0;
  double phi_a = 0.0;
  double rho_b = 0.0;
  double phi_b = 0.0;

  /// Builds a point with phases reduced into [0, 2pi); rejects negative moduli.
  static VariationalPoint make(double rho_a, double phi_a, double rho_b, double phi_b);
};

/// Reduces an angle into [0, 2pi).
double reduce_phase(double phi);

/// Parses "0.5", "1e-3" or a simple rational "1/2".  Throws DomainError.
double parse_number(std::string_view text);

}  // namespace dicke
