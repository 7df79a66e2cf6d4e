#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/fft.hpp"
#include "nlsthresh/norms.hpp"
#include "nlsthresh/params.hpp"
#include "nlsthresh/profile.hpp"
#include "nlsthresh/rearrange.hpp"

namespace nls {

enum class SolverMethod { Shooting, FixedPoint, Rescaled };

inline const char* to_string(SolverMethod m) {
  switch (m) {
    case SolverMethod::Shooting: return "shooting";
    case SolverMethod::FixedPoint: return "fixed-point";
    case SolverMethod::Rescaled: return "rescaled";
  }
  return "unknown";
}

/// Positive radial solution of −ΔΦ + ωΦ = λ|Φ|^α Φ together with its norms.
struct GroundState {
  RadialProfile profile;
  ModelParams params;
  NormSet norms;
  SolverMethod method = SolverMethod::Shooting;
  double residual_linf = 0.0;
  /// Cartesian solution the profile was extracted from (fixed-point solver only).
  std::optional<WaveField> field;

  double l2() const { return norms.l2(); }
  double lp_nonlinear() const { return norms.lp_at(params.alpha + 2.0); }
};

/// Relative deviations from the three Pohozaev identities
///   ‖∇ψ‖² = ωNα/(4−α(N−2))·‖ψ‖²,
///   ‖ψ‖^{α+2}_{α+2} = 2ω(α+2)/(λ(4−α(N−2)))·‖ψ‖²,
///   ‖ψ‖^{α+2}_{α+2} = 2(α+2)/(λNα)·‖∇ψ‖².
struct PohozaevResiduals {
  double res1 = 0.0;
  double res2 = 0.0;
  double res3 = 0.0;
  double max() const { return std::max({res1, res2, res3}); }
};

inline PohozaevResiduals pohozaev_residuals(const NormSet& n, const ModelParams& p) {
  const double N = p.dim, a = p.alpha, D = p.sobolev_gap();
  const double G = n.grad_sq, M = n.mass, P = n.lp_at(a + 2.0);
  require(G > 0.0 && P > 0.0, ErrorKind::InvalidInput, "Pohozaev residuals need a nonzero field");
  PohozaevResiduals r;
  r.res1 = std::abs(G - p.omega * N * a / D * M) / G;
  r.res2 = std::abs(P - 2.0 * p.omega * (a + 2.0) / (p.lambda * D) * M) / P;
  r.res3 = std::abs(P - 2.0 * (a + 2.0) / (p.lambda * N * a) * G) / P;
  return r;
}

inline PohozaevResiduals pohozaev_residuals(const GroundState& gs) {
  return pohozaev_residuals(gs.norms, gs.params);
}

/// Closed-form 1-D solution of −R'' + R = |R|^α R.
inline double soliton_1d(double alpha, double x) {
  return std::pow((alpha + 2.0) / 2.0, 1.0 / alpha) *
         std::pow(1.0 / std::cosh(alpha * x / 2.0), 2.0 / alpha);
}

/// Sup-norm of R'' + (N−1)/r·R' − ωR + λ|R|^α R over the grid (one-sided
/// nodes near r_max excluded), relative to ω·R(0). Sixth-order differences,
/// with the profile reflected evenly through r = 0.
inline double equation_residual(const RadialProfile& prof, const ModelParams& p) {
  const auto& f = prof.values;
  const std::size_t n = f.size();
  const double h = prof.grid.spacing();
  auto at = [&](long j) { return f[static_cast<std::size_t>(std::abs(j))]; };
  static constexpr std::array<double, 4> d2{-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  static constexpr std::array<double, 4> d1{0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  const double scale = p.omega * std::abs(f[0]);
  require(scale > 0.0, ErrorKind::InvalidInput, "profile vanishes at the origin");
  double worst = 0.0;
  for (std::size_t j = 0; j + 3 < n; ++j) {
    const long jj = static_cast<long>(j);
    double u2 = d2[0] * at(jj), u1 = 0.0;
    for (long k = 1; k <= 3; ++k) {
      u2 += d2[k] * (at(jj + k) + at(jj - k));
      u1 += d1[k] * (at(jj + k) - at(jj - k));
    }
    u2 /= h * h;
    u1 /= h;
    const double r = prof.grid.node(j);
    const double radial = (j == 0) ? (prof.dim - 1) * u2 : (prof.dim - 1) / r * u1;
    const double u = f[j];
    const double res = u2 + radial - p.omega * u + p.lambda * std::pow(std::abs(u), p.alpha) * u;
    worst = std::max(worst, std::abs(res));
  }
  return worst / scale;
}

namespace detail {

using Real = long double;

/// R, R' at radius r.
struct OdePoint {
  Real r = 0;
  Real u = 0;
  Real v = 0;
};

enum class ShotKind { Overshoot, Undershoot, Inconclusive };

/// Integrator for R'' + (N−1)/r·R' − ωR + λ|R|^α R = 0 with Dormand–Prince 5(4).
class RadialShooter {
 public:
  RadialShooter(const ModelParams& p, const RadialGrid& g)
      : dim_(p.dim), alpha_(p.alpha), lambda_(p.lambda), omega_(p.omega), grid_(g) {}

  /// State at the first grid node r = dr: series expansion at dr/1024, then
  /// geometrically growing steps (h = r/4) out to dr.
  OdePoint start(Real amp) const {
    const Real f0 = omega_ * amp - lambda_ * std::pow(std::abs(amp), alpha_) * amp;
    const Real df0 = omega_ - lambda_ * (alpha_ + 1) * std::pow(std::abs(amp), alpha_);
    const Real c2 = f0 / (2 * dim_);
    const Real c4 = df0 * c2 / (4 * (dim_ + 2));
    const Real dr = grid_.spacing();
    const Real r = dr / 1024;
    OdePoint s{r, amp + c2 * r * r + c4 * r * r * r * r, 2 * c2 * r + 4 * c4 * r * r * r};
    while (s.r < dr) {
      OdePoint next;
      step(s, std::min(s.r / 4, dr - s.r), next, 1);
      s = next;
      if (dr - s.r < dr * 1e-15L) break;
    }
    s.r = dr;
    return s;
  }

  /// Picks the number of equal substeps per grid interval from an adaptive
  /// pilot run (local tolerance `tol`); afterwards every shot uses the same
  /// step sequence, so the outcome is a monotone function of the amplitude.
  void calibrate(Real amp, Real tol) {
    OdePoint s = start(amp);
    Real h = grid_.spacing() / 4;
    Real h_min = grid_.spacing();
    const Real r_end = grid_.r_max;
    int guard = 0;
    while (s.r < r_end && ++guard < 10000000) {
      h = std::min(h, r_end - s.r);
      OdePoint next;
      const Real err = step(s, h, next, tol);
      if (err <= 1) {
        s = next;
        h_min = std::min(h_min, h);
        if (s.u <= 0 || (s.v > 0 && s.u > 0)) break;
      }
      const Real fac = err == 0 ? 5 : std::clamp<Real>(0.9L * std::pow(err, -0.2L), 0.2L, 5.0L);
      h *= fac;
    }
    substeps_ = std::max<long>(1, static_cast<long>(std::ceil(grid_.spacing() / h_min)));
  }

  long substeps() const { return substeps_; }

  /// Advance from node j to node j+1.
  void advance_node(OdePoint& s) const {
    const Real h = grid_.spacing() / static_cast<Real>(substeps_);
    for (long k = 0; k < substeps_; ++k) {
      OdePoint next;
      step(s, h, next, 1);
      s = next;
    }
  }

  ShotKind shoot(Real amp) const {
    OdePoint s = start(amp);
    for (std::size_t j = 1; j + 1 < grid_.n_points; ++j) {
      advance_node(s);
      if (!std::isfinite(s.u) || s.u <= 0) return ShotKind::Overshoot;
      if (s.v > 0) return ShotKind::Undershoot;
    }
    return ShotKind::Inconclusive;
  }

 private:
  void rhs(Real r, Real u, Real v, Real& du, Real& dv) const {
    du = v;
    dv = -(dim_ - 1) / r * v + omega_ * u - lambda_ * std::pow(std::abs(u), alpha_) * u;
  }

  /// One DP5(4) step; returns the scaled error estimate.
  Real step(const OdePoint& s, Real h, OdePoint& out, Real tol) const {
    static constexpr Real a21 = 1.0L / 5;
    static constexpr Real a31 = 3.0L / 40, a32 = 9.0L / 40;
    static constexpr Real a41 = 44.0L / 45, a42 = -56.0L / 15, a43 = 32.0L / 9;
    static constexpr Real a51 = 19372.0L / 6561, a52 = -25360.0L / 2187, a53 = 64448.0L / 6561,
                          a54 = -212.0L / 729;
    static constexpr Real a61 = 9017.0L / 3168, a62 = -355.0L / 33, a63 = 46732.0L / 5247,
                          a64 = 49.0L / 176, a65 = -5103.0L / 18656;
    static constexpr Real b1 = 35.0L / 384, b3 = 500.0L / 1113, b4 = 125.0L / 192,
                          b5 = -2187.0L / 6784, b6 = 11.0L / 84;
    static constexpr Real e1 = b1 - 5179.0L / 57600, e3 = b3 - 7571.0L / 16695,
                          e4 = b4 - 393.0L / 640, e5 = b5 + 92097.0L / 339200,
                          e6 = b6 - 187.0L / 2100, e7 = -1.0L / 40;
    Real ku[7], kv[7];
    rhs(s.r, s.u, s.v, ku[0], kv[0]);
    rhs(s.r + h / 5, s.u + h * a21 * ku[0], s.v + h * a21 * kv[0], ku[1], kv[1]);
    rhs(s.r + 3 * h / 10, s.u + h * (a31 * ku[0] + a32 * ku[1]),
        s.v + h * (a31 * kv[0] + a32 * kv[1]), ku[2], kv[2]);
    rhs(s.r + 4 * h / 5, s.u + h * (a41 * ku[0] + a42 * ku[1] + a43 * ku[2]),
        s.v + h * (a41 * kv[0] + a42 * kv[1] + a43 * kv[2]), ku[3], kv[3]);
    rhs(s.r + 8 * h / 9, s.u + h * (a51 * ku[0] + a52 * ku[1] + a53 * ku[2] + a54 * ku[3]),
        s.v + h * (a51 * kv[0] + a52 * kv[1] + a53 * kv[2] + a54 * kv[3]), ku[4], kv[4]);
    rhs(s.r + h,
        s.u + h * (a61 * ku[0] + a62 * ku[1] + a63 * ku[2] + a64 * ku[3] + a65 * ku[4]),
        s.v + h * (a61 * kv[0] + a62 * kv[1] + a63 * kv[2] + a64 * kv[3] + a65 * kv[4]), ku[5],
        kv[5]);
    out.r = s.r + h;
    out.u = s.u + h * (b1 * ku[0] + b3 * ku[2] + b4 * ku[3] + b5 * ku[4] + b6 * ku[5]);
    out.v = s.v + h * (b1 * kv[0] + b3 * kv[2] + b4 * kv[3] + b5 * kv[4] + b6 * kv[5]);
    rhs(out.r, out.u, out.v, ku[6], kv[6]);
    const Real eu = h * (e1 * ku[0] + e3 * ku[2] + e4 * ku[3] + e5 * ku[4] + e6 * ku[5] + e7 * ku[6]);
    const Real ev = h * (e1 * kv[0] + e3 * kv[2] + e4 * kv[3] + e5 * kv[4] + e6 * kv[5] + e7 * kv[6]);
    const Real su = tol * (1 + std::abs(out.u));
    const Real sv = tol * (1 + std::abs(out.v));
    return std::max(std::abs(eu) / su, std::abs(ev) / sv);
  }

  Real dim_, alpha_, lambda_, omega_;
  RadialGrid grid_;
  long substeps_ = 1;
};

/// Decaying solution of the linearized radial equation, T(r) for r > 0.
inline double linear_tail(int dim, double k, double r) {
  const double x = k * r;
  switch (dim) {
    case 1: return std::exp(-x);
    case 2: return x > 700.0 ? 0.0 : std::cyl_bessel_k(0.0, x);
    default: return std::exp(-x) / r;
  }
}

}  // namespace detail

/// Default radial grid for frequency ω: r_max = 25/√ω, 8193 nodes.
inline RadialGrid default_radial_grid(double omega = 1.0) {
  return RadialGrid(25.0 / std::sqrt(omega), 8193);
}

/// Ground state by shooting on R(0): bisection between an amplitude whose
/// trajectory crosses zero and one that turns upward while positive. The
/// bracket is refined to the resolution of extended precision; the final
/// profile follows the bracket until either the nonlinearity is negligible
/// or the two bracketing trajectories separate, and is continued by the
/// decaying solution of the linearized equation beyond that radius.
inline GroundState solve_shooting(const ModelParams& params,
                                  const RadialGrid& grid = RadialGrid(25.0, 8193)) {
  require(params.dim >= 1 && params.dim <= 3, ErrorKind::InvalidInput, "dimension must be 1, 2 or 3");
  require(std::isfinite(params.alpha) && params.alpha > 0.0, ErrorKind::InvalidInput,
          "alpha must be positive");
  require(std::isfinite(params.omega) && params.omega > 0.0, ErrorKind::InvalidInput,
          "omega must be positive");
  require(std::isfinite(params.lambda), ErrorKind::InvalidInput, "lambda must be finite");
  grid.validate();
  require(grid.r_max * std::sqrt(params.omega) >= 25.0 * (1.0 - 1e-12), ErrorKind::InvalidInput,
          "radial grid must reach 25/sqrt(omega)");
  require(params.lambda > 0.0 && params.sobolev_gap() > 0.0, ErrorKind::NoGroundState,
          "no positive decaying solution for these parameters");

  using detail::Real;
  using detail::ShotKind;
  detail::RadialShooter shooter(params, grid);
  const Real guess = std::pow((params.omega * (params.alpha + 2.0)) / (2.0 * params.lambda),
                              1.0 / params.alpha);
  shooter.calibrate(guess, 1e-12L);

  // Bracket: lo undershoots, hi overshoots.
  // A trajectory that neither crosses zero nor turns upward (for instance the
  // constant solution) stays on the undershooting side.
  auto kind_of = [&](Real amp) {
    const ShotKind k = shooter.shoot(amp);
    return k == ShotKind::Inconclusive ? ShotKind::Undershoot : k;
  };
  Real lo = guess, hi = guess;
  const ShotKind first = kind_of(guess);
  if (first == ShotKind::Overshoot) {
    do {
      lo /= 10;
      require(lo >= 1e-6L, ErrorKind::NoGroundState, "no undershooting amplitude above 1e-6");
    } while (kind_of(lo) == ShotKind::Overshoot);
    hi = lo * 10;
  } else {
    do {
      hi *= 10;
      require(hi <= 1e6L, ErrorKind::NoGroundState, "no overshooting amplitude below 1e6");
    } while (kind_of(hi) != ShotKind::Overshoot);
    lo = hi / 10;
  }
  for (int it = 0; it < 400; ++it) {
    const Real mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    if (kind_of(mid) == ShotKind::Overshoot) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const std::size_t n = grid.n_points;
  std::vector<double> values(n);
  const Real amp = (lo + hi) / 2;
  values[0] = static_cast<double>(amp);
  detail::OdePoint sl = shooter.start(lo), sh = shooter.start(hi);
  const double k = std::sqrt(params.omega);
  std::size_t j = 1;
  for (; j < n; ++j) {
    if (j > 1) {
      shooter.advance_node(sl);
      shooter.advance_node(sh);
    }
    const Real u = (sl.u + sh.u) / 2;
    values[j] = static_cast<double>(u);
    const bool linear = params.lambda * std::pow(std::abs(static_cast<double>(u)), params.alpha) <=
                        1e-12 * params.omega;
    const bool split = std::abs(sh.u - sl.u) > 1e-8L * std::abs(u);
    if (linear || split) break;
  }
  require(j < n, ErrorKind::ConvergenceFailure, "shooting did not reach the linear tail");
  const double r_m = grid.node(j);
  const double t_m = detail::linear_tail(params.dim, k, r_m);
  for (std::size_t i = j + 1; i < n; ++i) {
    values[i] = values[j] * detail::linear_tail(params.dim, k, grid.node(i)) / t_m;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const bool ok = values[i] > 0.0 ? values[i + 1] < values[i] : values[i + 1] == 0.0;
    require(ok && values[i] >= 0.0, ErrorKind::ConvergenceFailure,
            "shooting profile is not positive and decreasing");
  }

  GroundState gs;
  gs.profile = RadialProfile(grid, std::move(values), params.dim);
  gs.params = params;
  gs.method = SolverMethod::Shooting;
  gs.norms = radial_norms(gs.profile, {params.alpha + 2.0}, true);
  gs.residual_linf = equation_residual(gs.profile, params);
  return gs;
}

/// Unit ground state R (λ = ω = 1) on the default grid.
inline GroundState unit_ground_state(int dim, double alpha) {
  return solve_shooting(ModelParams{dim, alpha, 1.0, 1.0});
}

struct FixedPointOptions {
  std::size_t max_iterations = 10000;
  double tolerance = 1e-12;
};

/// Ground state on a periodic box by the stabilized spectral iteration
///   Φ̂ ← S^θ · (λ|Φ|^α Φ)^ / (ω + |k|²),
///   S = ⟨(ω−Δ)Φ, Φ⟩ / ⟨λ|Φ|^α Φ, Φ⟩,  θ = (α+1)/α,
/// started from a Gaussian. The radial profile is the Schwarz rearrangement of
/// the converged field; norms come from the Cartesian quadrature.
inline GroundState solve_fixed_point(const ModelParams& params, const CartesianGrid& grid,
                                     const FixedPointOptions& opts = {}) {
  params.validate_focusing();
  grid.validate();
  require(grid.dim == params.dim, ErrorKind::InvalidInput,
          "grid dimension must match the model dimension");
  const std::size_t total = grid.total_points();
  const auto plan = FftPlan::for_grid(grid);

  std::vector<double> symbol(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    double k2;
    if (grid.dim == 1) {
      const double k = grid.wavenumber(idx);
      k2 = k * k;
    } else {
      const double kx = grid.wavenumber(idx / grid.points);
      const double ky = grid.wavenumber(idx % grid.points);
      k2 = kx * kx + ky * ky;
    }
    symbol[idx] = params.omega + k2;
  }

  WaveField phi = WaveField::zeros(grid, params);
  const double amp0 = std::pow(params.omega * (params.alpha + 2.0) / (2.0 * params.lambda),
                               1.0 / params.alpha);
  for (std::size_t idx = 0; idx < total; ++idx) {
    phi.values[idx] = amp0 * std::exp(-params.omega * phi.radius_sq(idx) / 2.0);
  }

  const double theta = (params.alpha + 1.0) / params.alpha;
  std::vector<Complex> phat(total), nhat(total);
  bool converged = false;
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    for (std::size_t i = 0; i < total; ++i) {
      const double v = phi.values[i].real();
      phat[i] = v;
      nhat[i] = params.lambda * std::pow(std::abs(v), params.alpha) * v;
    }
    plan->forward(phat);
    plan->forward(nhat);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      num += symbol[i] * std::norm(phat[i]);
      den += (nhat[i] * std::conj(phat[i])).real();
    }
    require(den > 0.0 && std::isfinite(num / den), ErrorKind::ConvergenceFailure,
            "fixed-point iteration collapsed");
    const double factor = std::pow(num / den, theta);
    for (std::size_t i = 0; i < total; ++i) nhat[i] *= factor / symbol[i];
    plan->backward(nhat);
    double diff = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const double v = nhat[i].real();
      diff = std::max(diff, std::abs(v - phi.values[i].real()));
      peak = std::max(peak, std::abs(v));
      phi.values[i] = v;
    }
    require(std::isfinite(diff), ErrorKind::ConvergenceFailure, "fixed-point iteration diverged");
    if (diff < opts.tolerance * std::max(peak, 1e-300)) {
      converged = true;
      break;
    }
  }
  require(converged, ErrorKind::ConvergenceFailure, "fixed-point iteration did not converge");

  // Spectral residual of −ΔΦ + ωΦ − λ|Φ|^αΦ relative to ωΦ(0).
  for (std::size_t i = 0; i < total; ++i) phat[i] = phi.values[i];
  plan->forward(phat);
  for (std::size_t i = 0; i < total; ++i) phat[i] *= symbol[i];
  plan->backward(phat);
  double res = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double v = phi.values[i].real();
    res = std::max(res, std::abs(phat[i].real() - params.lambda * std::pow(std::abs(v), params.alpha) * v));
    peak = std::max(peak, std::abs(v));
  }

  GroundState gs;
  gs.params = params;
  gs.method = SolverMethod::FixedPoint;
  gs.norms = field_norms(phi, {params.alpha + 2.0}, true);
  gs.profile = schwarz_rearrange(phi);
  gs.residual_linf = res / (params.omega * peak);
  gs.field = std::move(phi);
  return gs;
}

/// Φ(x) = (ω/λ)^{1/α} R(√ω x) from the unit ground state R.
inline GroundState rescale_unit_to_model(const GroundState& unit, double omega, double lambda) {
  require(std::isfinite(omega) && omega > 0.0, ErrorKind::InvalidInput, "omega must be positive");
  require(std::isfinite(lambda) && lambda > 0.0, ErrorKind::InvalidInput, "lambda must be positive");
  require(std::abs(unit.params.omega - 1.0) < 1e-12 && std::abs(unit.params.lambda - 1.0) < 1e-12,
          ErrorKind::InvalidInput, "rescaling expects the unit ground state");
  const double a = unit.params.alpha;
  const double N = unit.params.dim;
  const double amp = std::pow(omega / lambda, 1.0 / a);
  const double amp2 = amp * amp;
  const double vol = std::pow(omega, -N / 2.0);

  GroundState out;
  out.params = unit.params;
  out.params.omega = omega;
  out.params.lambda = lambda;
  out.method = SolverMethod::Rescaled;
  out.profile = unit.profile.stretched(1.0 / std::sqrt(omega), amp);
  out.residual_linf = unit.residual_linf;
  out.norms.mass = unit.norms.mass * amp2 * vol;
  out.norms.grad_sq = unit.norms.grad_sq * amp2 * vol * omega;
  for (const auto& [p, v] : unit.norms.lp) out.norms.lp[p] = v * std::pow(amp, p) * vol;
  if (unit.norms.variance) out.norms.variance = *unit.norms.variance * amp2 * vol / omega;
  return out;
}

}  // namespace nls
