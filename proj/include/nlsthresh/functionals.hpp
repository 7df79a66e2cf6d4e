#pragma once

#include <cmath>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/fft.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/norms.hpp"
#include "nlsthresh/params.hpp"
#include "nlsthresh/profile.hpp"

namespace nls {

/// Norms needed by the functionals: mass, gradient and L^{α+2}.
inline NormSet functional_norms(const WaveField& f, const ModelParams& p) {
  return field_norms(f, {p.alpha + 2.0}, false);
}
inline NormSet functional_norms(const RadialProfile& f, const ModelParams& p) {
  return radial_norms(f, {p.alpha + 2.0}, false);
}

/// E = ½‖∇φ‖² − λ/(α+2)·‖φ‖^{α+2}_{α+2}.
inline double energy(const NormSet& n, const ModelParams& p) {
  return 0.5 * n.grad_sq - p.lambda / (p.alpha + 2.0) * n.lp_at(p.alpha + 2.0);
}

/// Q = ‖∇φ‖² − λNα/(2(α+2))·‖φ‖^{α+2}_{α+2}.
inline double constraint_Q(const NormSet& n, const ModelParams& p) {
  return n.grad_sq - p.lambda * p.dim * p.alpha / (2.0 * (p.alpha + 2.0)) * n.lp_at(p.alpha + 2.0);
}

/// S = E + (ω/2)·‖φ‖².
inline double action_S(const NormSet& n, const ModelParams& p) {
  return energy(n, p) + 0.5 * p.omega * n.mass;
}

/// β*(φ) = [2(α+2)/(λNα) · ‖∇φ‖² / ‖φ‖^{α+2}_{α+2}]^{2/(Nα−4)}, the dilation
/// parameter at which β ↦ S(𝒫(β, φ)) peaks.
inline double beta_star(const NormSet& n, const ModelParams& p) {
  p.require_supercritical();
  const double P = n.lp_at(p.alpha + 2.0);
  require(n.mass > 0.0 && P > 0.0, ErrorKind::InvalidInput, "beta_star of the zero field");
  const double base = 2.0 * (p.alpha + 2.0) / (p.lambda * p.dim * p.alpha) * n.grad_sq / P;
  return std::pow(base, 2.0 / p.supercritical_gap());
}

/// Weinstein functional J = ‖f‖^{(4−α(N−2))/2} ‖∇f‖^{Nα/2} / ‖f‖^{α+2}_{α+2}.
inline double weinstein_J(const NormSet& n, const ModelParams& p) {
  const double P = n.lp_at(p.alpha + 2.0);
  require(n.mass > 0.0 && P > 0.0, ErrorKind::InvalidInput, "J of the zero field");
  return std::pow(n.mass, p.sobolev_gap() / 4.0) * std::pow(n.grad_sq, p.dim * p.alpha / 4.0) / P;
}

template <class F>
double energy(const F& f, const ModelParams& p) { return energy(functional_norms(f, p), p); }
template <class F>
double constraint_Q(const F& f, const ModelParams& p) { return constraint_Q(functional_norms(f, p), p); }
template <class F>
double action_S(const F& f, const ModelParams& p) { return action_S(functional_norms(f, p), p); }
template <class F>
double beta_star(const F& f, const ModelParams& p) { return beta_star(functional_norms(f, p), p); }
template <class F>
double weinstein_J(const F& f, const ModelParams& p) { return weinstein_J(functional_norms(f, p), p); }

/// 𝒫(β, ψ)(r) = β^{N/2} ψ(βr) on a radial profile (exact: the grid is rescaled).
inline RadialProfile dilate_P(double beta, const RadialProfile& f) {
  require(std::isfinite(beta) && beta > 0.0, ErrorKind::InvalidInput, "beta must be positive");
  return f.stretched(1.0 / beta, std::pow(beta, f.dim / 2.0));
}

namespace detail {

/// Rows e^{i k_m (β x_j + L)}/n of the trigonometric interpolant evaluated at
/// β·x_j; the Nyquist mode enters as a cosine. Points outside the box get 0.
inline std::vector<Complex> dilation_matrix(const CartesianGrid& g, double beta) {
  const std::size_t n = g.points;
  std::vector<Complex> m(n * n, Complex(0.0, 0.0));
  const double L = g.half_width;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = beta * g.coordinate(j);
    if (y < -L || y >= L) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = g.wavenumber(k) * (y + L);
      m[j * n + k] = (k == n / 2) ? Complex(std::cos(phase), 0.0)
                                  : Complex(std::cos(phase), std::sin(phase));
      m[j * n + k] /= static_cast<double>(n);
    }
  }
  return m;
}

/// Fraction of the mass with some |x_i| ≥ limit.
inline double mass_outside(const WaveField& f, double limit) {
  double total = 0.0, outside = 0.0;
  for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
    const double w = std::norm(f.values[idx]);
    total += w;
    bool out;
    if (f.grid.dim == 1) {
      out = std::abs(f.grid.coordinate(idx)) >= limit;
    } else {
      out = std::abs(f.grid.coordinate(idx / f.grid.points)) >= limit ||
            std::abs(f.grid.coordinate(idx % f.grid.points)) >= limit;
    }
    if (out) outside += w;
  }
  return total > 0.0 ? outside / total : 0.0;
}

}  // namespace detail

/// 𝒫(β, ψ)(x) = β^{N/2} ψ(βx) on the periodic box, by evaluating the
/// trigonometric interpolant of ψ at the dilated points. Costs O(n²) per axis
/// line. Throws BoundaryLeakage when mass would be lost outside the box or the
/// result reaches the outer tenth of the box.
inline WaveField dilate_P(double beta, const WaveField& f) {
  require(std::isfinite(beta) && beta > 0.0, ErrorKind::InvalidInput, "beta must be positive");
  f.validate();
  if (beta == 1.0) return f;
  const auto& g = f.grid;
  const double leak_in = detail::mass_outside(f, beta * g.half_width);
  require(leak_in <= 1e-12, ErrorKind::BoundaryLeakage,
          "dilated field does not fit in the box (input mass outside beta*L)");

  const std::size_t n = g.points;
  const auto plan = FftPlan::for_grid(g);
  std::vector<Complex> spec(f.values);
  plan->forward(spec);
  const auto m = detail::dilation_matrix(g, beta);
  const double amp = std::pow(beta, g.dim / 2.0);

  WaveField out = f;
  if (g.dim == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex s(0.0, 0.0);
      for (std::size_t k = 0; k < n; ++k) s += m[j * n + k] * spec[k];
      out.values[j] = amp * s;
    }
  } else {
    std::vector<Complex> tmp(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t kx = 0; kx < n; ++kx) {
        const Complex w = m[i * n + kx];
        if (w == Complex(0.0, 0.0)) continue;
        for (std::size_t ky = 0; ky < n; ++ky) tmp[i * n + ky] += w * spec[kx * n + ky];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Complex s(0.0, 0.0);
        for (std::size_t ky = 0; ky < n; ++ky) s += m[j * n + ky] * tmp[i * n + ky];
        out.values[i * n + j] = amp * s;
      }
    }
  }
  require(boundary_mass_fraction(out) <= 1e-12, ErrorKind::BoundaryLeakage,
          "dilated field touches the box edge");
  return out;
}

/// Ground-state data for the variational sets: m = S(Φ) = min S over bound states.
struct VariationalContext {
  ModelParams params;
  GroundState ground_state;
  double m = 0.0;
};

inline VariationalContext make_variational_context(const GroundState& gs) {
  VariationalContext ctx{gs.params, gs, action_S(gs.norms, gs.params)};
  require(ctx.m > 0.0, ErrorKind::InvalidInput, "ground-state action must be positive");
  return ctx;
}

}  // namespace nls
