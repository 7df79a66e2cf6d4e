#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/functionals.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/norms.hpp"
#include "nlsthresh/profile.hpp"
#include "nlsthresh/thresholds.hpp"

namespace nls {

/// Samples profile(|x|) on the box (cubic interpolation). The profile must have
/// decayed below 1e-10 of its peak at the box half-width.
inline WaveField embed_radial(const RadialProfile& profile, const CartesianGrid& grid,
                              const ModelParams& params) {
  profile.validate();
  grid.validate();
  require(profile.dim == grid.dim, ErrorKind::InvalidInput, "profile and grid dimensions differ");
  const double peak = profile.peak();
  double tail = 0.0;
  if (profile.grid.r_max < grid.half_width) {
    tail = std::abs(profile.values.back());
  } else {
    for (std::size_t j = 0; j < profile.values.size(); ++j) {
      if (profile.grid.node(j) >= grid.half_width) tail = std::max(tail, std::abs(profile.values[j]));
    }
  }
  require(tail <= 1e-10 * peak, ErrorKind::BoundaryLeakage,
          "profile has not decayed at the box half-width");
  WaveField f = WaveField::zeros(grid, params);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    f.values[idx] = profile.value_at(std::sqrt(f.radius_sq(idx)));
  }
  return f;
}

inline WaveField embed_radial(const RadialProfile& profile, const CartesianGrid& grid) {
  ModelParams p;
  p.dim = profile.dim;
  return embed_radial(profile, grid, p);
}

/// Radius holding all but `fraction` of the profile's mass.
inline double mass_radius(const RadialProfile& profile, double fraction = 1e-12) {
  const std::size_t n = profile.values.size();
  const double dr = profile.grid.spacing();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = profile.values[j] * profile.values[j] * std::pow(profile.grid.node(j), profile.dim - 1);
  }
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t j = n - 1; j > 0; --j) tail[j - 1] = tail[j] + 0.5 * (w[j - 1] + w[j]) * dr;
  const double total = tail[0];
  require(total > 0.0, ErrorKind::InvalidInput, "profile has no mass");
  for (std::size_t j = 0; j < n; ++j) {
    if (tail[j] <= fraction * total) return profile.grid.node(j);
  }
  return profile.grid.r_max;
}

/// Radius beyond which |profile| stays below `fraction` of its peak.
inline double decay_radius(const RadialProfile& profile, double fraction = 1e-10) {
  const double limit = fraction * profile.peak();
  for (std::size_t j = profile.values.size(); j-- > 0;) {
    if (std::abs(profile.values[j]) > limit) return profile.grid.node(std::min(j + 1, profile.values.size() - 1));
  }
  return 0.0;
}

/// Box of half-width 1.5× the radius holding all but 1e-12 of the mass, or
/// the 1e-10 decay radius of the amplitude if that is larger.
inline CartesianGrid auto_grid(const RadialProfile& profile, std::size_t points) {
  return CartesianGrid(profile.dim, std::max(1.5 * mass_radius(profile, 1e-12), decay_radius(profile)), points);
}

/// μ·exp(−ν²|x|²/2) with ‖φ‖ = a and ‖∇φ‖ = b.
inline WaveField gaussian_with_norms(double a, double b, const CartesianGrid& grid,
                                     const ModelParams& params) {
  require(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0, ErrorKind::InvalidInput,
          "Gaussian norms must be positive");
  grid.validate();
  const int N = grid.dim;
  const double nu = b / a * std::sqrt(2.0 / N);
  const double mu = std::sqrt(a * a * std::pow(nu, N) / std::pow(M_PI, N / 2.0));
  require(N * std::erfc(0.9 * nu * grid.half_width) <= 1e-12, ErrorKind::BoundaryLeakage,
          "Gaussian is too wide for the box");
  require(grid.max_wavenumber() >= 6.0 * nu, ErrorKind::InvalidInput,
          "Gaussian is too narrow for the grid spacing");
  WaveField f = WaveField::zeros(grid, params);
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    f.values[idx] = mu * std::exp(-nu * nu * f.radius_sq(idx) / 2.0);
  }
  return f;
}

inline WaveField gaussian_with_norms(double a, double b, const CartesianGrid& grid) {
  ModelParams p;
  p.dim = grid.dim;
  return gaussian_with_norms(a, b, grid, p);
}

/// The blow-up datum φ_{a,b} = 𝒫(β, ψ), ψ(x) = ν R_λ(√ω x), with its
/// construction scalars and the checks made while building it. R_λ is the
/// ground state at ω = 1 for the model's λ, so ν = ω^{1/α}.
struct PhiAbCertificate {
  double a = 0.0;
  double b = 0.0;
  double nu = 0.0;
  double omega = 0.0;
  double beta = 0.0;
  GroundState psi;        // ground state of −ΔΦ + ωΦ = λ|Φ|^αΦ
  RadialProfile profile;  // φ_{a,b} in radial form
  NormSet norms;          // radial norms of φ_{a,b}
  double energy = 0.0;
  double Q = 0.0;
  double S = 0.0;
  double m = 0.0;  // S(ψ)
  WaveField field;
};

/// Builds φ_{a,b} for a > r*(b). The datum is assembled in radial form and
/// embedded last; `grid` defaults to auto_grid with `points` nodes per axis.
inline PhiAbCertificate make_phi_ab(double a, double b, const ThresholdSet& ts,
                                    const GroundState& R_unit,
                                    std::optional<CartesianGrid> grid = std::nullopt,
                                    std::size_t points = 4096) {
  const ModelParams& p = ts.params;
  require(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0, ErrorKind::InvalidInput,
          "a and b must be positive");
  p.require_supercritical();
  require(a > ts.r_star(b), ErrorKind::PreconditionViolation, "phi_ab needs a > r*(b)");

  const int N = p.dim;
  const double Na = N * p.alpha;
  const double D = p.sobolev_gap();
  const double r_inv = ts.r_star_inv(a);

  PhiAbCertificate c;
  c.a = a;
  c.b = b;
  c.omega = std::pow(ts.Lambda() / a, 4.0 * p.alpha / p.supercritical_gap());
  c.nu = std::pow(r_inv, N / 2.0) * std::pow(D / Na, N / 4.0) * std::pow(a, -(N - 2) / 2.0) / ts.Lambda();
  c.beta = b / r_inv;
  c.psi = rescale_unit_to_model(R_unit, c.omega, p.lambda);
  require(std::abs(c.psi.l2() - a) <= 1e-6 * a && std::abs(c.psi.norms.grad_l2() - r_inv) <= 1e-6 * r_inv,
          ErrorKind::ConvergenceFailure, "rescaled ground state misses the prescribed norms");

  const ModelParams pw = p.with_omega(c.omega);
  c.profile = dilate_P(c.beta, c.psi.profile);
  c.norms = radial_norms(c.profile, {p.alpha + 2.0}, true);
  c.energy = energy(c.norms, pw);
  c.Q = constraint_Q(c.norms, pw);
  c.S = action_S(c.norms, pw);
  c.m = action_S(c.psi.norms, pw);
  require(c.Q < 0.0, ErrorKind::PreconditionViolation, "constructed datum has Q >= 0");
  require(c.S < c.m, ErrorKind::PreconditionViolation, "constructed datum has S >= m");

  const CartesianGrid g = grid.value_or(auto_grid(c.profile, points));
  c.field = embed_radial(c.profile, g, pw);
  return c;
}

}  // namespace nls
