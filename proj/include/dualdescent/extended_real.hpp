#pragma once

#include <cmath>
#include <limits>

namespace dualdescent {

// Tagged extended-real scalar: finite value or +infinity. Indicator terms
// return this instead of a sentinel double, so "is the point in dom g"
// stays a testable predicate.
class ExtendedReal {
 public:
  constexpr ExtendedReal() : value_(0.0), finite_(true) {}
  constexpr ExtendedReal(double v) : value_(v), finite_(true) {}

  static constexpr ExtendedReal infinity() { return ExtendedReal(0.0, false); }

  constexpr bool finite() const { return finite_; }

  // Value when finite; +inf as a double otherwise.
  constexpr double as_double() const {
    return finite_ ? value_ : std::numeric_limits<double>::infinity();
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }

  friend constexpr bool operator<(ExtendedReal a, ExtendedReal b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator<=(ExtendedReal a, ExtendedReal b) { return !(b < a); }
  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }

 private:
  constexpr ExtendedReal(double v, bool finite) : value_(v), finite_(finite) {}
  double value_;
  bool finite_;
};

}  // namespace dualdescent
