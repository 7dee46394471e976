#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace binomcap::numerics {

// ln Gamma(x), x > 0.  Lanczos (g=7, 9 terms) with reflection below 0.5.
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x), x > 0.  Recurrence shift to x >= 6, then the
// asymptotic series through the x^-14 term.
double digamma(double x);

// ln C(n, y).  Symmetric in y <-> n-y exactly as computed.
double log_binomial(long long n, long long y);

// ln sum exp(v_i), max-shifted.  Exact for a single element.
double log_sum_exp(std::span<const double> values);

// Neumaier compensated sum; deterministic for a fixed input order.
double compensated_sum(std::span<const double> values);

// Signed quantity stored as (sign, ln|value|).  sign == 0 iff the value is
// exactly zero, in which case log_magnitude is ignored.
struct LogValue {
  double log_magnitude = 0.0;
  int sign = 0;

  static LogValue from_double(double v);
  static LogValue from_log(double log_mag, int sign = 1);
  double to_double() const;

  LogValue operator*(const LogValue& o) const;
  LogValue operator/(const LogValue& o) const;
  LogValue operator+(const LogValue& o) const;
  LogValue operator-(const LogValue& o) const;
  bool operator<(const LogValue& o) const;
  bool is_zero() const { return sign == 0; }
};

}  // namespace binomcap::numerics
