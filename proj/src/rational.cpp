#include "fwland/rational.hpp"

#include <cctype>
#include <limits>

namespace fwland {

namespace {

Int pow10(unsigned k) {
  Int r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

[[noreturn]] void malformed(const std::string& text) {
  throw std::invalid_argument("malformed number: '" + text + "'");
}

}  // namespace

Rat parse_rational(const std::string& text) {
  if (text.empty()) malformed(text);
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  unsigned frac_digits = 0;
  bool seen_point = false, seen_slash = false;
  std::string den_digits;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      if (seen_slash)
        den_digits.push_back(c);
      else {
        digits.push_back(c);
        if (seen_point) ++frac_digits;
      }
    } else if (c == '.' && !seen_point && !seen_slash) {
      seen_point = true;
    } else if (c == '/' && !seen_slash && !seen_point) {
      seen_slash = true;
    } else {
      malformed(text);
    }
  }
  if (digits.empty()) malformed(text);
  if (seen_slash && den_digits.empty()) malformed(text);

  Int num(digits);
  if (negative) num = -num;
  Int den = seen_slash ? Int(den_digits) : pow10(frac_digits);
  if (den == 0) malformed(text);
  return Rat(num, den);
}

std::string rational_to_string(const Rat& value) {
  Int num = boost::multiprecision::numerator(value);
  Int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  // Pull out factors of 2 and 5; a pure 2^a*5^b denominator prints as decimal.
  Int rest = den;
  unsigned twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return num.str() + "/" + den.str();

  unsigned k = twos > fives ? twos : fives;
  Int scaled = num;
  for (unsigned i = 0; i < k - twos; ++i) scaled *= 2;
  for (unsigned i = 0; i < k - fives; ++i) scaled *= 5;

  bool negative = scaled < 0;
  std::string s = (negative ? Int(-scaled) : scaled).str();
  if (s.size() <= k) s.insert(0, k + 1 - s.size(), '0');
  s.insert(s.size() - k, ".");
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return negative ? "-" + s : s;
}

double Rate::to_double() const {
  if (!finite_) return std::numeric_limits<double>::infinity();
  return value_.convert_to<double>();
}

}  // namespace fwland
