#ifndef APERIODIC_LOG_VALUE_HPP
#define APERIODIC_LOG_VALUE_HPP

#include <cmath>
#include <limits>

namespace aperiodic {

// Signed scalar stored as (sign, log|x|): represents sign * exp(log_mag)
// for any real without overflow or underflow. sign == 0 pairs with
// log_mag == -inf and stands for exact zero.
class LogValue {
 public:
  LogValue() = default;
  LogValue(int sign, double log_mag)
      : sign_(sign), log_(sign == 0 ? -inf() : log_mag) {}

  static LogValue from_double(double x) {
    if (x > 0.0) return {1, std::log(x)};
    if (x < 0.0) return {-1, std::log(-x)};
    return {};
  }
  static LogValue one() { return {1, 0.0}; }

  int sign() const { return sign_; }
  double log_mag() const { return log_; }
  bool is_zero() const { return sign_ == 0; }

  // Converts back to double; may overflow to inf or underflow to 0.
  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_); }

  LogValue operator-() const { return {-sign_, log_}; }
  LogValue abs() const { return {sign_ == 0 ? 0 : 1, log_}; }

  friend LogValue operator*(const LogValue& a, const LogValue& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    return {a.sign_ * b.sign_, a.log_ + b.log_};
  }

  // Division by zero is the caller's bug; result would be +-inf magnitude.
  friend LogValue operator/(const LogValue& a, const LogValue& b) {
    if (a.sign_ == 0) return {};
    return {a.sign_ * b.sign_, a.log_ - b.log_};
  }

  // Max-factored addition: a + b = hi * (1 + s*exp(lo - hi)). The expm1
  // branch keeps near-cancellation accurate to one rounding.
  friend LogValue operator+(const LogValue& a, const LogValue& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const bool a_hi = a.log_ >= b.log_;
    const LogValue& hi = a_hi ? a : b;
    const LogValue& lo = a_hi ? b : a;
    const double d = lo.log_ - hi.log_;  // <= 0
    if (hi.sign_ * lo.sign_ > 0) {
      return {hi.sign_, hi.log_ + std::log1p(std::exp(d))};
    }
    const double rest = -std::expm1(d);  // 1 - e^d in [0, 1)
    if (rest == 0.0) return {};
    return {hi.sign_, hi.log_ + std::log(rest)};
  }

  friend LogValue operator-(const LogValue& a, const LogValue& b) { return a + (-b); }

 private:
  static constexpr double inf() { return std::numeric_limits<double>::infinity(); }

  int sign_ = 0;
  double log_ = -inf();
};

}  // namespace aperiodic

#endif
