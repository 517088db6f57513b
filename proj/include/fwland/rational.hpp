#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace fwland {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parse an exact rational from text. Accepts decimal literals ("2", "0.5",
/// "-3.25", parsed as p/10^k) and ratio literals ("7/2").
Rat parse_rational(const std::string& text);

/// Render exactly: decimal when the denominator divides a power of ten,
/// "p/q" otherwise.
std::string rational_to_string(const Rat& value);

/// Extended rational: a finite value or +infinity, with the convention
/// inf + r = inf and inf > every finite value.
class Rate {
 public:
  Rate() : finite_(true), value_(0) {}
  Rate(Rat value) : finite_(true), value_(std::move(value)) {}
  Rate(int value) : finite_(true), value_(value) {}

  static Rate infinity() {
    Rate r;
    r.finite_ = false;
    return r;
  }

  bool is_finite() const { return finite_; }

  const Rat& finite() const {
    if (!finite_) throw std::logic_error("Rate: infinite value used as finite");
    return value_;
  }

  double to_double() const;
  std::string str() const { return finite_ ? rational_to_string(value_) : "inf"; }

  friend bool operator==(const Rate& a, const Rate& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator!=(const Rate& a, const Rate& b) { return !(a == b); }
  friend bool operator<(const Rate& a, const Rate& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const Rate& a, const Rate& b) { return b < a; }
  friend bool operator<=(const Rate& a, const Rate& b) { return !(b < a); }
  friend bool operator>=(const Rate& a, const Rate& b) { return !(a < b); }

  friend Rate operator+(const Rate& a, const Rate& b) {
    if (!a.finite_ || !b.finite_) return infinity();
    return Rate(a.value_ + b.value_);
  }
  /// Subtraction with inf - finite = inf; finite - inf is undefined.
  friend Rate operator-(const Rate& a, const Rate& b) {
    if (!b.finite_) throw std::logic_error("Rate: cannot subtract infinity");
    if (!a.finite_) return infinity();
    return Rate(a.value_ - b.value_);
  }

 private:
  bool finite_;
  Rat value_;
};

inline const Rate& min(const Rate& a, const Rate& b) { return b < a ? b : a; }
inline const Rate& max(const Rate& a, const Rate& b) { return a < b ? b : a; }

}  // namespace fwland
