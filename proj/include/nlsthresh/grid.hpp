#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "nlsthresh/errors.hpp"

namespace nls {

/// Uniform grid r_j = j·dr on [0, r_max].
struct RadialGrid {
  double r_max = 25.0;
  std::size_t n_points = 8193;

  RadialGrid() = default;
  RadialGrid(double rmax, std::size_t n) : r_max(rmax), n_points(n) { validate(); }

  double spacing() const { return r_max / static_cast<double>(n_points - 1); }
  double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }

  void validate() const {
    require(std::isfinite(r_max) && r_max > 0.0, ErrorKind::InvalidInput, "r_max must be positive");
    require(n_points >= 16, ErrorKind::InvalidInput, "radial grid needs at least 16 nodes");
  }

  /// Same node count, every radius multiplied by `factor`.
  RadialGrid scaled(double factor) const { return RadialGrid(r_max * factor, n_points); }
};

inline bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Periodic box [−L, L)^dim sampled with `points` nodes per axis. Node j sits
/// at x_j = (j − points/2)·dx so that ±x pairs are bitwise symmetric.
struct CartesianGrid {
  int dim = 1;
  double half_width = 20.0;
  std::size_t points = 1024;

  CartesianGrid() = default;
  CartesianGrid(int d, double L, std::size_t n) : dim(d), half_width(L), points(n) { validate(); }

  double spacing() const { return 2.0 * half_width / static_cast<double>(points); }
  double cell_volume() const { return std::pow(spacing(), dim); }
  std::size_t total_points() const { return dim == 1 ? points : points * points; }

  /// Signed lattice offset of index j from the box center.
  std::int64_t offset(std::size_t j) const {
    return static_cast<std::int64_t>(j) - static_cast<std::int64_t>(points / 2);
  }
  double coordinate(std::size_t j) const { return static_cast<double>(offset(j)) * spacing(); }

  /// Angular wave number of FFT bin j (Nyquist bin mapped to −π/dx).
  double wavenumber(std::size_t j) const {
    const auto n = static_cast<std::int64_t>(points);
    std::int64_t m = static_cast<std::int64_t>(j);
    if (m >= n / 2) m -= n;
    return M_PI / half_width * static_cast<double>(m);
  }
  double max_wavenumber() const { return M_PI / spacing(); }

  void validate() const {
    require(dim == 1 || dim == 2, ErrorKind::InvalidInput, "Cartesian grids are 1-D or 2-D");
    require(std::isfinite(half_width) && half_width > 0.0, ErrorKind::InvalidInput,
            "half width must be positive");
    require(is_power_of_two(points) && points >= 8, ErrorKind::InvalidInput,
            "points per axis must be a power of two >= 8");
  }

  bool operator==(const CartesianGrid&) const = default;
};

}  // namespace nls
