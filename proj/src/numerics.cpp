#include "binomcap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace binomcap::numerics {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2 pi)

// Godfrey's Lanczos coefficients, g = 7.
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double log_gamma_core(double x) {
  // valid for x >= 0.5
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
  const double t = x + 6.5;  // x + g - 0.5
  return kLogSqrt2Pi + (x - 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x must be > 0");
  if (x >= 0.5) return log_gamma_core(x);
  // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
  return std::log(M_PI / std::sin(M_PI * x)) - log_gamma_core(1.0 - x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: x must be > 0");
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli tail: -sum B_2k / (2k x^2k), truncated at x^-14.
  double tail = inv2 * (1.0 / 12 +
                inv2 * (-1.0 / 120 +
                inv2 * (1.0 / 252 +
                inv2 * (-1.0 / 240 +
                inv2 * (1.0 / 132 +
                inv2 * (-691.0 / 32760 +
                inv2 * (1.0 / 12)))))));
  return acc + std::log(x) - 0.5 * inv - tail;
}

double log_binomial(long long n, long long y) {
  if (n < 0) throw std::domain_error("log_binomial: n must be >= 0");
  if (y < 0 || y > n) throw std::out_of_range("log_binomial: y outside [0, n]");
  const long long m = std::min(y, n - y);  // makes y <-> n-y bit-identical
  if (m == 0) return 0.0;
  return log_gamma(double(n) + 1.0) - log_gamma(double(m) + 1.0) -
         log_gamma(double(n - m) + 1.0);
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("log_sum_exp: empty list");
  if (values.size() == 1) return values[0];
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : values) mx = std::max(mx, v);
  if (std::isinf(mx) && mx < 0) return mx;  // all -inf
  double s = 0.0, c = 0.0;  // Neumaier on the exp terms
  for (double v : values) {
    const double e = std::exp(v - mx);
    const double t = s + e;
    c += (std::abs(s) >= e) ? ((s - t) + e) : ((e - t) + s);
    s = t;
  }
  return mx + std::log(s + c);
}

double compensated_sum(std::span<const double> values) {
  double s = 0.0, c = 0.0;
  for (double v : values) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  return s + c;
}

LogValue LogValue::from_double(double v) {
  if (v == 0.0) return {0.0, 0};
  return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

LogValue LogValue::from_log(double log_mag, int sign) {
  if (sign == 0) return {0.0, 0};
  return {log_mag, sign > 0 ? 1 : -1};
}

double LogValue::to_double() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_magnitude);
}

LogValue LogValue::operator*(const LogValue& o) const {
  if (sign == 0 || o.sign == 0) return {0.0, 0};
  return {log_magnitude + o.log_magnitude, sign * o.sign};
}

LogValue LogValue::operator/(const LogValue& o) const {
  if (o.sign == 0) throw std::domain_error("LogValue: division by zero");
  if (sign == 0) return {0.0, 0};
  return {log_magnitude - o.log_magnitude, sign * o.sign};
}

LogValue LogValue::operator+(const LogValue& o) const {
  if (sign == 0) return o;
  if (o.sign == 0) return *this;
  const LogValue& big = log_magnitude >= o.log_magnitude ? *this : o;
  const LogValue& sml = log_magnitude >= o.log_magnitude ? o : *this;
  const double d = sml.log_magnitude - big.log_magnitude;  // <= 0
  if (big.sign == sml.sign)
    return {big.log_magnitude + std::log1p(std::exp(d)), big.sign};
  const double r = std::exp(d);
  if (r == 1.0) return {0.0, 0};  // exact cancellation
  return {big.log_magnitude + std::log1p(-r), big.sign};
}

LogValue LogValue::operator-(const LogValue& o) const {
  return *this + LogValue{o.log_magnitude, -o.sign};
}

bool LogValue::operator<(const LogValue& o) const {
  if (sign != o.sign) return sign < o.sign;
  if (sign == 0) return false;
  if (sign > 0) return log_magnitude < o.log_magnitude;
  return log_magnitude > o.log_magnitude;
}

}  // namespace binomcap::numerics
