#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace rsub {

/// Compensated (Kahan) accumulator. The energy sums compared by the descent
/// tests differ by less than one ulp of a naive sum near convergence, so the
/// objective evaluations have to be reproducible to a couple of ulps.
class KahanSum {
 public:
  void add(double value) {
    double y = value - compensation_;
    double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Shortest decimal representation that parses back to the same double.
/// Always contains a '.' or an exponent so the output is unambiguously a
/// floating-point literal ("1.0", not "1").
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace rsub
