#include "dicke/model.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace dicke {

HalfInteger HalfInteger::from_twice(std::int64_t twice) {
  if (twice <= 0) {
    throw DomainError("j must be positive (got 2j = " + std::to_string(twice) + ")");
  }
  return HalfInteger(twice);
}

HalfInteger HalfInteger::from_double(double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError("j must be a positive half-integer (got " + std::to_string(value) + ")");
  }
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-9 || rounded > 9.0e15) {
    throw DomainError("j must be a positive half-integer (got " + std::to_string(value) + ")");
  }
  return from_twice(static_cast<std::int64_t>(rounded));
}

void ModelParams::validate() const {
  if (!std::isfinite(omega_a) || omega_a < 0.0) {
    throw DomainError("omega_a must be finite and >= 0");
  }
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw DomainError("gamma must be finite and >= 0");
  }
}

double reduce_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

VariationalPoint VariationalPoint::make(double rho_a, double phi_a, double rho_b, double phi_b) {
  if (!(rho_a >= 0.0) || !(rho_b >= 0.0)) {
    throw DomainError("coherent amplitudes rho_a, rho_b must be >= 0");
  }
  return {rho_a, reduce_phase(phi_a), rho_b, reduce_phase(phi_b)};
}

namespace {

double parse_decimal(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DomainError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw DomainError("empty numeric value");
  if (text.front() == '+') text.remove_prefix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const double num = parse_decimal(trim(text.substr(0, slash)));
  const double den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0.0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace dicke
