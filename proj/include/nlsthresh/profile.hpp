#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/fft.hpp"
#include "nlsthresh/grid.hpp"
#include "nlsthresh/params.hpp"

namespace nls {

/// Real radial function f(|x|) on x ∈ R^dim, sampled on a RadialGrid.
struct RadialProfile {
  RadialGrid grid;
  std::vector<double> values;
  int dim = 1;

  RadialProfile() = default;
  RadialProfile(RadialGrid g, std::vector<double> v, int d)
      : grid(g), values(std::move(v)), dim(d) {
    validate();
  }

  void validate() const {
    grid.validate();
    require(dim >= 1 && dim <= 3, ErrorKind::InvalidInput, "profile dimension must be 1, 2 or 3");
    require(values.size() == grid.n_points, ErrorKind::InvalidInput,
            "profile length does not match its grid");
    for (double v : values) {
      require(std::isfinite(v), ErrorKind::InvalidInput, "profile contains non-finite values");
    }
  }

  double peak() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }

  /// Cubic Lagrange interpolation, extended evenly through r = 0 and by zero
  /// beyond r_max (profiles represent decaying functions).
  double value_at(double r) const {
    r = std::abs(r);
    const double dr = grid.spacing();
    const auto n = static_cast<long>(values.size());
    if (r > grid.r_max) return 0.0;
    long i = static_cast<long>(std::floor(r / dr));
    if (i > n - 1) i = n - 1;
    long first = i - 1;
    if (first + 3 > n - 1) first = n - 4;
    const double s = r / dr;
    double result = 0.0;
    for (long a = 0; a < 4; ++a) {
      const long ia = first + a;
      double w = 1.0;
      for (long b = 0; b < 4; ++b) {
        if (b == a) continue;
        w *= (s - static_cast<double>(first + b)) / static_cast<double>(a - b);
      }
      result += w * values[static_cast<std::size_t>(std::abs(ia))];
    }
    return result;
  }

  /// The same function on a grid with every radius multiplied by `factor`
  /// and values multiplied by `amplitude`: r ↦ amplitude·f(r / factor).
  RadialProfile stretched(double factor, double amplitude) const {
    std::vector<double> v(values);
    for (double& x : v) x *= amplitude;
    return RadialProfile(grid.scaled(factor), std::move(v), dim);
  }
};

/// Complex field on a periodic Cartesian box, tagged with a time stamp and
/// the model it is meant to be evolved with.
struct WaveField {
  CartesianGrid grid;
  std::vector<Complex> values;
  double time = 0.0;
  ModelParams params;

  WaveField() = default;
  WaveField(CartesianGrid g, std::vector<Complex> v, ModelParams p, double t = 0.0)
      : grid(g), values(std::move(v)), time(t), params(p) {
    validate();
  }

  static WaveField zeros(const CartesianGrid& g, const ModelParams& p) {
    return WaveField(g, std::vector<Complex>(g.total_points(), Complex(0.0, 0.0)), p);
  }

  void validate() const {
    grid.validate();
    require(values.size() == grid.total_points(), ErrorKind::InvalidInput,
            "field length does not match its grid");
    for (const auto& v : values) {
      require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::InvalidInput,
              "field contains non-finite values");
    }
  }

  bool all_finite() const {
    return std::all_of(values.begin(), values.end(), [](const Complex& v) {
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
  }

  /// Squared distance from the box center of flat index `idx`.
  double radius_sq(std::size_t idx) const {
    if (grid.dim == 1) {
      const double x = grid.coordinate(idx);
      return x * x;
    }
    const double x = grid.coordinate(idx / grid.points);
    const double y = grid.coordinate(idx % grid.points);
    return x * x + y * y;
  }
};

}  // namespace nls
