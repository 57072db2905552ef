#pragma once

#include <limits>
#include <ostream>

#include "domattr/error.hpp"

namespace domattr {

/// A nonnegative quantity that may be +infinity (moments, tail indices).
/// Infinity is a state, not a sentinel value: value() refuses to hand it out.
class ExtendedReal {
 public:
  constexpr ExtendedReal(double v) : value_(v), finite_(true) {}  // NOLINT

  static constexpr ExtendedReal infinity() { return ExtendedReal(); }

  constexpr bool is_finite() const { return finite_; }
  constexpr bool is_infinite() const { return !finite_; }

  double value() const {
    if (!finite_) fail(ErrorCategory::invalid_argument, "value() of an infinite quantity");
    return value_;
  }

  /// The quantity as a double, mapping infinity to +inf (for printing and comparisons).
  constexpr double as_double() const {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
  }

  friend constexpr bool operator==(const ExtendedReal& l, const ExtendedReal& r) {
    return l.finite_ == r.finite_ && (!l.finite_ || l.value_ == r.value_);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.finite_) return os << x.value_;
    return os << "inf";
  }

 private:
  constexpr ExtendedReal() : value_(0.0), finite_(false) {}

  double value_;
  bool finite_;
};

}  // namespace domattr
