#pragma once

// Exact rational arithmetic plus the small formatting helpers shared by every
// module that serializes numbers.  All probability bookkeeping in the library
// is done with arbitrary-precision rationals so that table values like 163/224
// can be compared for exact equality instead of within a tolerance.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace racforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return static_cast<double>(r); }

// Always emits "p/q", including "3/1", so the reader never has to guess
// whether a bare integer was meant as a rational.
inline std::string to_fraction_string(const Rat& r) {
  std::string out = numerator(r).str();
  out += '/';
  out += denominator(r).str();
  return out;
}

// Accepts "p/q", a bare integer, or a plain decimal such as "0.78868"
// (converted exactly, e.g. 78868/100000 reduced).  Used by code-file and
// manifest parsing; no exponent form is needed there.
inline Rat parse_fraction(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const std::string num(text.substr(0, slash));
    const std::string den(text.substr(slash + 1));
    if (num.empty() || den.empty())
      throw std::invalid_argument("malformed rational literal: " + std::string(text));
    Int p(num), q(den);
    if (q == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return Rat(p, q);
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rat(Int(std::string(text)));
  std::string digits(text.substr(0, dot));
  const std::string_view frac = text.substr(dot + 1);
  bool negative = !digits.empty() && digits[0] == '-';
  digits += frac;
  if (digits.empty() || digits == "-")
    throw std::invalid_argument("malformed decimal literal: " + std::string(text));
  Int scale = 1;
  for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Int p(digits);
  // "-0.5" parses its integer part as "-0", so reapply the sign if it was lost.
  if (negative && p > 0) p = -p;
  return Rat(p, scale);
}

// 17 significant digits: enough to round-trip an IEEE double exactly, used
// for every real-valued field we print to CSV or the terminal.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// A number that is exact when we can afford exactness (combinatorial and LP
// results in rational mode) and a double otherwise (entropy inverses, quantum
// values).  Bound reports and design results carry these so serialization can
// pick "p/q" versus decimal per entry.
struct numeric_value {
  std::optional<Rat> exact;
  double approx = 0.0;

  numeric_value() = default;
  explicit numeric_value(const Rat& r) : exact(r), approx(to_double(r)) {}
  explicit numeric_value(double d) : approx(d) {}

  bool is_exact() const { return exact.has_value(); }
  double as_double() const { return is_exact() ? to_double(*exact) : approx; }
  std::string str() const {
    return is_exact() ? to_fraction_string(*exact) : format_real(approx);
  }
};

inline Int binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Int result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

}  // namespace racforge
