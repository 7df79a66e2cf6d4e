#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlsthresh/errors.hpp"

namespace nls {

/// Composite Simpson rule on uniformly spaced samples. An even sample count
/// closes the last three intervals with Simpson's 3/8 rule.
inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  require(n >= 4, ErrorKind::InvalidInput, "Simpson quadrature needs at least 4 samples");
  std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;  // last node covered by 1/3 rule
  double sum = 0.0;
  for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
    sum += f[j] + 4.0 * f[j + 1] + f[j + 2];
  }
  sum *= h / 3.0;
  if (n % 2 == 0) {
    const std::size_t j = simpson_end;
    sum += 3.0 * h / 8.0 * (f[j] + 3.0 * f[j + 1] + 3.0 * f[j + 2] + f[j + 3]);
  }
  return sum;
}

/// First derivative, fourth-order centered stencil in the interior and
/// fourth-order one-sided stencils on the two nodes nearest each end.
inline std::vector<double> derivative4(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  require(n >= 5, ErrorKind::InvalidInput, "derivative stencil needs at least 5 samples");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t j = 2; j + 2 < n; ++j) {
    d[j] = c * (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]);
  }
  const std::size_t m = n - 1;
  d[m] = c * (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]);
  d[m - 1] = c * (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]);
  return d;
}

}  // namespace nls
