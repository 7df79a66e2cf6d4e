#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/fft.hpp"
#include "nlsthresh/functionals.hpp"
#include "nlsthresh/initial_data.hpp"
#include "nlsthresh/norms.hpp"
#include "nlsthresh/rearrange.hpp"

namespace nls {

struct GnMinimizeOptions {
  std::size_t max_iterations = 100000;
  double tolerance = 1e-10;
  /// Starting profile (any scale); a Gaussian when empty.
  std::optional<RadialProfile> initial;
};

struct GnMinimum {
  double constant = 0.0;  // 1 / J at the minimizer
  double J = 0.0;
  std::size_t iterations = 0;
  RadialProfile minimizer;  // unit mass, gradient norm within 5% of 1
};

namespace detail {

struct GnState {
  WaveField field;
  NormSet norms;
  double logJ = 0.0;
};

inline double log_weinstein(const NormSet& n, const ModelParams& p) {
  return p.sobolev_gap() / 4.0 * std::log(n.mass) + p.dim * p.alpha / 4.0 * std::log(n.grad_sq) -
         std::log(n.lp_at(p.alpha + 2.0));
}

/// μ·f(ν|x|) with μ, ν chosen so that mass and gradient norm are both 1.
inline GnState normalized_embedding(const RadialProfile& prof, const CartesianGrid& grid,
                                    const ModelParams& p) {
  WaveField w = WaveField::zeros(grid, p);
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] = prof.value_at(std::sqrt(w.radius_sq(i)));
  const NormSet n0 = field_norms(w, {p.alpha + 2.0});
  require(n0.mass > 0.0 && n0.grad_sq > 0.0, ErrorKind::ConvergenceFailure, "minimizing sequence vanished");
  const double nu = std::sqrt(n0.mass / n0.grad_sq);
  const double mu = std::sqrt(std::pow(nu, p.dim) / n0.mass);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    w.values[i] = mu * prof.value_at(nu * std::sqrt(w.radius_sq(i)));
  }
  GnState s{std::move(w), {}, 0.0};
  s.norms = field_norms(s.field, {p.alpha + 2.0});
  s.logJ = log_weinstein(s.norms, p);
  return s;
}

}  // namespace detail

/// Minimizes the Weinstein functional J over fields on `grid`: a
/// preconditioned gradient step on log J (with backtracking), Schwarz
/// rearrangement of the result on the lattice, and the rescaling f ↦ μ f(ν·)
/// that restores ‖f‖ = ‖∇f‖ = 1. J is invariant under that rescaling, so the
/// spatial part (which needs interpolation) is only applied once ν leaves
/// [0.95, 1.05]; otherwise just the amplitude is normalized. Stops when J changes by less than `tolerance` (relative)
/// and returns 1/J, the sharp Gagliardo–Nirenberg constant.
inline GnMinimum gn_constant_minimize(const ModelParams& params, const CartesianGrid& grid,
                                      const GnMinimizeOptions& opts = {}) {
  require(params.dim >= 1 && params.dim <= 2 && std::isfinite(params.alpha) && params.alpha > 0.0 &&
              params.sobolev_gap() > 0.0,
          ErrorKind::InvalidInput, "GN minimization supports N = 1, 2 and 0 < alpha < 4/(N-2)");
  grid.validate();
  require(grid.dim == params.dim, ErrorKind::InvalidInput, "grid dimension must match the model");
  const ModelParams p{params.dim, params.alpha, 1.0, 1.0};
  const std::size_t total = grid.total_points();
  const auto plan = FftPlan::for_grid(grid);

  std::vector<double> k2(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (grid.dim == 1) {
      k2[i] = grid.wavenumber(i) * grid.wavenumber(i);
    } else {
      const double kx = grid.wavenumber(i / grid.points), ky = grid.wavenumber(i % grid.points);
      k2[i] = kx * kx + ky * ky;
    }
  }

  RadialProfile start;
  if (opts.initial) {
    require(opts.initial->dim == params.dim, ErrorKind::InvalidInput, "initial profile dimension differs");
    start = *opts.initial;
  } else {
    const RadialGrid rg(grid.half_width, grid.points + 1);
    std::vector<double> v(rg.n_points);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(-rg.node(j) * rg.node(j) / 2.0);
    start = RadialProfile(rg, std::move(v), params.dim);
  }
  detail::GnState cur = detail::normalized_embedding(start, grid, p);

  const double D = p.sobolev_gap(), Na = p.dim * p.alpha;
  const double dv = grid.cell_volume();
  double tau = 0.5;
  std::vector<Complex> spec(total), dir(total);
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    const auto& v = cur.field.values;
    const double M = cur.norms.mass, G = cur.norms.grad_sq, P = cur.norms.lp_at(p.alpha + 2.0);
    // −Δv by FFT.
    for (std::size_t i = 0; i < total; ++i) spec[i] = v[i];
    plan->forward(spec);
    for (std::size_t i = 0; i < total; ++i) dir[i] = spec[i] * k2[i];
    plan->backward(dir);
    std::vector<double> grad(total);
    for (std::size_t i = 0; i < total; ++i) {
      const double x = v[i].real();
      grad[i] = D / 2.0 * x / M + Na / 2.0 * dir[i].real() / G -
                (p.alpha + 2.0) * std::pow(std::abs(x), p.alpha) * x / P;
    }
    for (std::size_t i = 0; i < total; ++i) dir[i] = grad[i];
    plan->forward(dir);
    for (std::size_t i = 0; i < total; ++i) dir[i] /= 1.0 + k2[i];
    plan->backward(dir);
    double slope = 0.0;
    for (std::size_t i = 0; i < total; ++i) slope += grad[i] * dir[i].real();
    slope *= dv;

    WaveField trial = cur.field;
    bool moved = false;
    tau = std::min(2.0 * tau, 4.0);
    while (slope > 0.0 && tau > 1e-14) {
      for (std::size_t i = 0; i < total; ++i) trial.values[i] = v[i].real() - tau * dir[i].real();
      const NormSet tn = field_norms(trial, {p.alpha + 2.0});
      if (tn.mass > 0.0 && tn.lp_at(p.alpha + 2.0) > 0.0 &&
          detail::log_weinstein(tn, p) <= cur.logJ - 1e-4 * tau * slope) {
        moved = true;
        break;
      }
      tau /= 2.0;
    }
    if (!moved) trial = cur.field;

    detail::GnState next{schwarz_rearrange_lattice(trial), {}, 0.0};
    next.norms = field_norms(next.field, {p.alpha + 2.0});
    const double nu = std::sqrt(next.norms.mass / next.norms.grad_sq);
    if (std::abs(nu - 1.0) > 0.05) {
      next = detail::normalized_embedding(schwarz_rearrange(next.field), grid, p);
    } else {
      const double mu = 1.0 / std::sqrt(next.norms.mass);
      for (auto& x : next.field.values) x *= mu;
      next.norms = field_norms(next.field, {p.alpha + 2.0});
    }
    next.logJ = detail::log_weinstein(next.norms, p);
    const double change = std::abs(std::exp(next.logJ - cur.logJ) - 1.0);
    cur = std::move(next);
    if (change < opts.tolerance) {
      GnMinimum out;
      out.J = std::exp(cur.logJ);
      out.constant = 1.0 / out.J;
      out.iterations = it;
      out.minimizer = schwarz_rearrange(cur.field);
      return out;
    }
  }
  fail(ErrorKind::ConvergenceFailure, "GN minimization did not converge");
}

}  // namespace nls
