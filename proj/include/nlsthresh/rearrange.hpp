#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/profile.hpp"

namespace nls {

namespace detail {

/// Solve the small dense system A x = b in place (partial pivoting).
template <std::size_t M>
std::array<double, M> solve_dense(std::array<std::array<double, M>, M> a, std::array<double, M> b) {
  for (std::size_t col = 0; col < M; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < M; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    require(a[col][col] != 0.0, ErrorKind::ConvergenceFailure, "singular local fit");
    for (std::size_t r = col + 1; r < M; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < M; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, M> x{};
  for (std::size_t i = M; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < M; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Radius/value samples of a rearranged lattice function, sorted by radius.
struct RadialSamples {
  std::vector<double> radius;
  std::vector<double> value;
};

/// Local tricube-weighted least-squares quartic through the samples around r
/// (samples are mirrored through r = 0), evaluated at r. The weights vanish
/// at the window edge, so the result is continuous in r.
inline double local_fit(const RadialSamples& s, double r, double spacing) {
  constexpr std::size_t degree = 4;
  constexpr std::size_t min_nodes = degree + 3;
  double window = 6.0 * spacing;
  for (int attempt = 0; attempt < 64; ++attempt, window += 0.5 * spacing) {
    std::array<std::array<double, degree + 1>, degree + 1> ata{};
    std::array<double, degree + 1> atb{};
    std::size_t count = 0;
    auto accumulate = [&](double rho, double v) {
      const double t = (rho - r) / spacing;
      const double u = 1.0 - std::pow(std::abs(rho - r) / window, 3);
      if (u <= 0.0) return;
      const double w = u * u * u;
      std::array<double, 2 * degree + 1> pw{};
      pw[0] = w;
      for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * t;
      for (std::size_t i = 0; i <= degree; ++i) {
        for (std::size_t j = 0; j <= degree; ++j) ata[i][j] += pw[i + j];
        atb[i] += pw[i] * v;
      }
      ++count;
    };
    const auto lo = std::lower_bound(s.radius.begin(), s.radius.end(), r - window);
    const auto hi = std::upper_bound(s.radius.begin(), s.radius.end(), r + window);
    for (auto it = lo; it != hi; ++it) {
      const auto k = static_cast<std::size_t>(it - s.radius.begin());
      accumulate(s.radius[k], s.value[k]);
    }
    if (r < window) {
      const auto mirror_end = std::upper_bound(s.radius.begin(), s.radius.end(), window - r);
      for (auto it = s.radius.begin(); it != mirror_end; ++it) {
        if (*it <= 0.0) continue;
        const auto k = static_cast<std::size_t>(it - s.radius.begin());
        accumulate(-s.radius[k], s.value[k]);
      }
    }
    if (count >= min_nodes) return solve_dense(ata, atb)[0];
  }
  fail(ErrorKind::ConvergenceFailure, "not enough lattice samples for the radial fit");
}

}  // namespace detail

/// Default radial grid for rearranging a field on `g`: radius L, spacing dx/2.
inline RadialGrid rearrangement_grid(const CartesianGrid& g) {
  return RadialGrid(g.half_width, g.points + 1);
}

namespace detail {

/// Flat lattice indices sorted by squared distance (in cells) from the box
/// center, with the shell boundaries.
struct ShellOrder {
  std::vector<std::size_t> index;
  std::vector<std::int64_t> shell;  // squared radius of index[k], nondecreasing
};

inline ShellOrder shell_order(const CartesianGrid& g) {
  ShellOrder o;
  const std::size_t total = g.total_points();
  std::vector<std::pair<std::int64_t, std::size_t>> keyed;
  keyed.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::int64_t s;
    if (g.dim == 1) {
      s = g.offset(idx) * g.offset(idx);
    } else {
      const auto i = g.offset(idx / g.points), j = g.offset(idx % g.points);
      s = i * i + j * j;
    }
    keyed.emplace_back(s, idx);
  }
  std::sort(keyed.begin(), keyed.end());
  o.index.reserve(total);
  o.shell.reserve(total);
  for (const auto& [s, idx] : keyed) {
    o.shell.push_back(s);
    o.index.push_back(idx);
  }
  return o;
}

/// Magnitudes sorted decreasingly and averaged over each shell: entry k is
/// the value dealt to lattice cell order.index[k].
inline std::vector<double> dealt_values(const WaveField& field, const ShellOrder& order) {
  std::vector<double> mags(field.values.size());
  for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::abs(field.values[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  for (std::size_t start = 0; start < mags.size();) {
    std::size_t end = start;
    double sum = 0.0;
    while (end < mags.size() && order.shell[end] == order.shell[start]) sum += mags[end++];
    const double mean = sum / static_cast<double>(end - start);
    for (std::size_t k = start; k < end; ++k) mags[k] = mean;
    start = end;
  }
  return mags;
}

/// |field| along the first axis through the box centre.
inline std::vector<double> center_row(const WaveField& field) {
  const auto& g = field.grid;
  std::vector<double> row(g.points);
  for (std::size_t i = 0; i < g.points; ++i) {
    row[i] = std::abs(field.values[g.dim == 1 ? i : i * g.points + g.points / 2]);
  }
  return row;
}

/// Discrete Fourier coefficients of periodic samples on the axis of `g`
/// (phases measured from x = −L, as for the FFT).
inline std::vector<Complex> axis_spectrum(const CartesianGrid& g, const std::vector<double>& row) {
  const std::size_t n = row.size();
  std::vector<Complex> spec(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = g.wavenumber(k);
    Complex c(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) c += row[j] * std::polar(1.0, -kk * (g.coordinate(j) + g.half_width));
    spec[k] = c / static_cast<double>(n);
  }
  return spec;
}

/// Real trigonometric interpolant at coordinate x (Nyquist mode as a cosine).
inline double trig_interpolate(const CartesianGrid& g, const std::vector<Complex>& spec, double x) {
  const std::size_t n = spec.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ph = g.wavenumber(k) * (x + g.half_width);
    sum += k == n / 2 ? spec[k].real() * std::cos(ph) : (spec[k] * std::polar(1.0, ph)).real();
  }
  return sum;
}

}  // namespace detail

/// Discrete Schwarz symmetrization on the lattice itself: the magnitudes of
/// `field`, sorted decreasingly, are dealt to the cells in order of increasing
/// distance from the box center (cells at equal distance share their mean).
/// Exactly equimeasurable up to the shell averaging; no interpolation.
inline WaveField schwarz_rearrange_lattice(const WaveField& field) {
  field.validate();
  const auto order = detail::shell_order(field.grid);
  const auto vals = detail::dealt_values(field, order);
  WaveField out = field;
  for (std::size_t k = 0; k < vals.size(); ++k) out.values[order.index[k]] = vals[k];
  return out;
}

/// Schwarz symmetrization of |field| as a radial profile. The sorted
/// magnitudes are placed at the radii of balls with the same measure as the
/// cells above them (one sample per lattice shell, at the shell's measure
/// midpoint) and a local least-squares fit carries them onto `target`
/// (default: radius L, spacing dx/2). When |field| already equals its lattice
/// rearrangement to 1e-6·peak (symmetric and decreasing about the box centre)
/// the profile is instead the trigonometric interpolant of |field| along the
/// first axis through the centre, so its error is bounded by that mismatch.
inline RadialProfile schwarz_rearrange(const WaveField& field,
                                       std::optional<RadialGrid> target = std::nullopt) {
  field.validate();
  const auto& g = field.grid;
  const RadialGrid out_grid = target.value_or(rearrangement_grid(g));
  const auto order = detail::shell_order(g);
  const auto vals = detail::dealt_values(field, order);

  const double peak = vals.empty() ? 0.0 : vals.front();
  bool already_symmetric = true;
  for (std::size_t k = 0; k < vals.size() && already_symmetric; ++k) {
    already_symmetric = std::abs(std::abs(field.values[order.index[k]]) - vals[k]) <= 1e-6 * peak;
  }

  if (already_symmetric) {
    std::vector<double> values(out_grid.n_points);
    const auto spec = detail::axis_spectrum(g, detail::center_row(field));
    for (std::size_t j = 0; j < values.size(); ++j) {
      values[j] = detail::trig_interpolate(g, spec, out_grid.node(j));
    }
    return RadialProfile(out_grid, std::move(values), g.dim);
  }

  detail::RadialSamples samples;
  const double dx = g.spacing();
  const double cell = g.cell_volume();
  for (std::size_t k = 0; k < vals.size();) {
    std::size_t end = k;
    while (end < vals.size() && order.shell[end] == order.shell[k]) ++end;
    const double measure = (static_cast<double>(k) + 0.5 * static_cast<double>(end - k)) * cell;
    samples.radius.push_back(g.dim == 1 ? measure / 2.0 : std::sqrt(measure / M_PI));
    samples.value.push_back(vals[k]);
    k = end;
  }

  std::vector<double> values(out_grid.n_points);
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = detail::local_fit(samples, out_grid.node(j), dx);
  }
  return RadialProfile(out_grid, std::move(values), g.dim);
}

}  // namespace nls
