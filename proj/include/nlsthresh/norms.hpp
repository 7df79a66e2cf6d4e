#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/fft.hpp"
#include "nlsthresh/profile.hpp"
#include "nlsthresh/quadrature.hpp"

namespace nls {

/// Integral norms of one function. `lp[p]` holds ‖f‖_{L^p}^p.
struct NormSet {
  double mass = 0.0;     // ‖f‖²_{L²}
  double grad_sq = 0.0;  // ‖∇f‖²_{L²}
  std::map<double, double> lp;
  std::optional<double> variance;  // ‖x f‖²_{L²}

  double lp_at(double p) const {
    auto it = lp.find(p);
    require(it != lp.end(), ErrorKind::InvalidInput,
            "norm set has no L^" + std::to_string(p) + " entry");
    return it->second;
  }

  double l2() const { return std::sqrt(mass); }
  double grad_l2() const { return std::sqrt(grad_sq); }
};

/// ∫_0^{r_max} g(r) r^{N−1} dr for samples g on the radial grid.
inline double radial_moment(const RadialGrid& grid, int dim, std::span<const double> g) {
  std::vector<double> w(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    w[j] = g[j] * std::pow(grid.node(j), dim - 1);
  }
  return simpson(w, grid.spacing());
}

/// Norms of the radial function f(|x|) on R^N with surface weight
/// |S^{N−1}| r^{N−1} dr.
inline NormSet radial_norms(const RadialProfile& profile, std::span<const double> exponents,
                            bool with_variance = false) {
  profile.validate();
  const auto& f = profile.values;
  const std::size_t n = f.size();
  const double surface = sphere_measure(profile.dim);
  const auto df = derivative4(f, profile.grid.spacing());

  std::vector<double> buf(n);
  NormSet out;
  for (std::size_t j = 0; j < n; ++j) buf[j] = f[j] * f[j];
  out.mass = surface * radial_moment(profile.grid, profile.dim, buf);
  for (std::size_t j = 0; j < n; ++j) buf[j] = df[j] * df[j];
  out.grad_sq = surface * radial_moment(profile.grid, profile.dim, buf);
  for (double p : exponents) {
    for (std::size_t j = 0; j < n; ++j) buf[j] = std::pow(std::abs(f[j]), p);
    out.lp[p] = surface * radial_moment(profile.grid, profile.dim, buf);
  }
  if (with_variance) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = profile.grid.node(j);
      buf[j] = r * r * f[j] * f[j];
    }
    out.variance = surface * radial_moment(profile.grid, profile.dim, buf);
  }
  return out;
}

inline NormSet radial_norms(const RadialProfile& profile, std::initializer_list<double> exponents,
                            bool with_variance = false) {
  return radial_norms(profile, std::span<const double>(exponents.begin(), exponents.size()),
                      with_variance);
}

/// Σ |k|² |û_k|² · dV / n, i.e. ‖∇u‖² by Parseval. `spectrum` is the
/// unnormalized forward transform of the field.
inline double spectral_grad_sq(const CartesianGrid& grid, std::span<const Complex> spectrum) {
  const std::size_t n = grid.points;
  double sum = 0.0;
  if (grid.dim == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = grid.wavenumber(j);
      sum += k * k * std::norm(spectrum[j]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double kx = grid.wavenumber(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double ky = grid.wavenumber(j);
        sum += (kx * kx + ky * ky) * std::norm(spectrum[i * n + j]);
      }
    }
  }
  return sum * grid.cell_volume() / static_cast<double>(grid.total_points());
}

inline std::vector<Complex> spectrum_of(const WaveField& field) {
  std::vector<Complex> spec(field.values);
  FftPlan::for_grid(field.grid)->forward(spec);
  return spec;
}

/// Trapezoid sums on the periodic box for mass, L^p and variance; Parseval
/// for the gradient.
inline NormSet field_norms(const WaveField& field, std::span<const double> exponents,
                           bool with_variance = false) {
  field.validate();
  const double dv = field.grid.cell_volume();
  NormSet out;
  double mass = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double a2 = std::norm(field.values[i]);
    mass += a2;
    if (with_variance) var += field.radius_sq(i) * a2;
  }
  out.mass = mass * dv;
  for (double p : exponents) {
    double s = 0.0;
    for (const auto& v : field.values) s += std::pow(std::abs(v), p);
    out.lp[p] = s * dv;
  }
  if (with_variance) out.variance = var * dv;
  const auto spec = spectrum_of(field);
  out.grad_sq = spectral_grad_sq(field.grid, spec);
  return out;
}

inline NormSet field_norms(const WaveField& field, std::initializer_list<double> exponents,
                           bool with_variance = false) {
  return field_norms(field, std::span<const double>(exponents.begin(), exponents.size()),
                     with_variance);
}

/// Fraction of the mass carried by nodes with some |x_i| > layer·L.
inline double boundary_mass_fraction(const WaveField& field, double layer = 0.9) {
  const auto& g = field.grid;
  const double edge = layer * g.half_width;
  double total = 0.0, outer = 0.0;
  for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
    const double a2 = std::norm(field.values[idx]);
    total += a2;
    bool near_edge;
    if (g.dim == 1) {
      near_edge = std::abs(g.coordinate(idx)) > edge;
    } else {
      near_edge = std::abs(g.coordinate(idx / g.points)) > edge ||
                  std::abs(g.coordinate(idx % g.points)) > edge;
    }
    if (near_edge) outer += a2;
  }
  return total > 0.0 ? outer / total : 0.0;
}

/// Fraction of Σ|û|² sitting in the top third of the resolved wave numbers
/// (any axis with |k_i| > 2/3·k_max).
inline double spectral_tail_fraction(const CartesianGrid& grid, std::span<const Complex> spectrum) {
  const double cut = 2.0 / 3.0 * grid.max_wavenumber();
  const std::size_t n = grid.points;
  double total = 0.0, tail = 0.0;
  for (std::size_t idx = 0; idx < spectrum.size(); ++idx) {
    const double a2 = std::norm(spectrum[idx]);
    total += a2;
    bool high;
    if (grid.dim == 1) {
      high = std::abs(grid.wavenumber(idx)) > cut;
    } else {
      high = std::abs(grid.wavenumber(idx / n)) > cut || std::abs(grid.wavenumber(idx % n)) > cut;
    }
    if (high) tail += a2;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace nls
