#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace nscert {

// Shortest round-trip-exact decimal form of a double. Used for every number
// that lands in a CSV or report so that identical runs produce identical
// bytes.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_g(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

inline std::string format_longdouble_g(long double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*Lg", digits, v);
  return buf;
}

// Least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x,
                                  const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace nscert
