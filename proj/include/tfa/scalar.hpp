#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tfa {

// Arbitrary-precision scalar. Variable mantissa, huge exponent range, so
// quantities like exp(-kappa) with kappa up to ~1e7 stay representable.
using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

// Scalar mode used when evaluating a network layer by layer.
struct Precision {
  enum class Mode { kStandardDouble, kExtended };

  Mode mode = Mode::kStandardDouble;
  unsigned mantissa_bits = 53;
  // When set, softmax scores are handled in the log domain (max subtraction),
  // so huge attention scores never overflow the scalar type.
  bool log_space = true;

  static Precision standard() { return Precision{}; }

  static Precision extended(unsigned bits) {
    if (bits < 64) throw std::invalid_argument("extended precision needs mantissa_bits >= 64");
    return Precision{Mode::kExtended, bits, true};
  }

  bool is_extended() const { return mode == Mode::kExtended; }
};

// Sets the default working precision for subsequently constructed BigFloat
// values. MPFR precision is per-number; this adjusts the constructor default.
inline void set_working_precision(unsigned mantissa_bits) {
  unsigned digits = static_cast<unsigned>(static_cast<double>(mantissa_bits) / 3.3219280948873623) + 4;
  BigFloat::default_precision(digits);
}

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.convert_to<double>(); }

// Mantissa needed to resolve values separated by exp(-depth_nats) next to
// O(1) magnitudes. Pure subtractions need the spread once; the value-mapping
// gadgets multiply exp(+depth)-scale slopes into O(1) activations, whose
// product rounding must also stay below the plateau width, hence the factor
// two for layer-by-layer evaluation.
inline unsigned bits_for_separation(double depth_nats, double safety = 2.0) {
  if (!(depth_nats > 0.0)) depth_nats = 64.0;
  double bits = safety * depth_nats * 1.4426950408889634 + 1024.0;
  if (bits > static_cast<double>(1u << 23))
    throw std::runtime_error("bits_for_separation: required mantissa too large");
  return static_cast<unsigned>(bits);
}

// A signed magnitude kept as (sign, log|x|). This is how separations far
// below double range (e.g. exp(-57000)) are stored and compared.
struct LogVal {
  int sign = 0;                                             // -1, 0, +1
  double lg = -std::numeric_limits<double>::infinity();     // natural log of |x|

  static LogVal zero() { return LogVal{}; }

  static LogVal from_double(double x) {
    if (x == 0.0) return LogVal{};
    return LogVal{x > 0 ? +1 : -1, std::log(std::fabs(x))};
  }

  static LogVal from_log(int sign, double lg) {
    if (sign == 0) return LogVal{};
    return LogVal{sign, lg};
  }

  bool is_zero() const { return sign == 0; }

  double to_double_lossy() const {
    if (sign == 0) return 0.0;
    return static_cast<double>(sign) * std::exp(lg);  // may underflow to 0
  }

  LogVal operator*(const LogVal& o) const {
    if (sign == 0 || o.sign == 0) return LogVal{};
    return LogVal{sign * o.sign, lg + o.lg};
  }

  LogVal abs() const { return LogVal{sign == 0 ? 0 : 1, lg}; }

  // |*this| < |o|
  bool abs_less(const LogVal& o) const {
    if (sign == 0) return o.sign != 0;
    if (o.sign == 0) return false;
    return lg < o.lg;
  }
};

inline LogVal min_abs(const LogVal& a, const LogVal& b) { return a.abs_less(b) ? a : b; }

}  // namespace tfa
