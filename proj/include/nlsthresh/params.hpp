#pragma once

#include <cmath>
#include <string>

#include "nlsthresh/errors.hpp"

namespace nls {

/// Parameters of i u_t + Δu + λ|u|^α u = 0 in R^N, together with the
/// frequency ω of the associated stationary problem −ΔΦ + ωΦ = λ|Φ|^α Φ.
struct ModelParams {
  int dim = 1;
  double alpha = 8.0;
  double lambda = 1.0;
  double omega = 1.0;

  double critical_alpha() const { return 4.0 / dim; }

  /// 4 − α(N−2); positive exactly when α is H¹-subcritical.
  double sobolev_gap() const { return 4.0 - alpha * (dim - 2); }

  /// Nα − 4; positive exactly in the L²-supercritical regime.
  double supercritical_gap() const { return dim * alpha - 4.0; }

  bool is_supercritical() const { return supercritical_gap() > 1e-12; }
  bool is_critical() const { return std::abs(supercritical_gap()) <= 1e-12; }

  void validate() const {
    require(dim >= 1 && dim <= 3, ErrorKind::InvalidInput, "dimension must be 1, 2 or 3");
    require(std::isfinite(alpha) && alpha > 0.0, ErrorKind::InvalidInput, "alpha must be positive");
    require(sobolev_gap() > 0.0, ErrorKind::InvalidInput,
            "alpha must satisfy alpha < 4/(N-2)");
    require(std::isfinite(lambda), ErrorKind::InvalidInput, "lambda must be finite");
    require(std::isfinite(omega) && omega > 0.0, ErrorKind::InvalidInput, "omega must be positive");
  }

  /// Validation for the ground-state problems, which need an attractive coupling.
  void validate_focusing() const {
    validate();
    require(lambda > 0.0, ErrorKind::InvalidInput, "ground states need lambda > 0");
  }

  void require_supercritical() const {
    require(is_supercritical(), ErrorKind::UnsupportedRegime,
            "operation needs alpha > 4/N (got alpha=" + std::to_string(alpha) +
                ", N=" + std::to_string(dim) + ")");
  }

  ModelParams with_omega(double w) const {
    ModelParams p = *this;
    p.omega = w;
    return p;
  }

  ModelParams with_lambda(double l) const {
    ModelParams p = *this;
    p.lambda = l;
    return p;
  }

  ModelParams unit() const {
    ModelParams p = *this;
    p.lambda = 1.0;
    p.omega = 1.0;
    return p;
  }
};

/// Surface measure of the unit sphere S^{N-1}: 2, 2π, 4π.
inline double sphere_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: fail(ErrorKind::InvalidInput, "dimension must be 1, 2 or 3");
  }
}

/// Volume of the ball of radius r in R^N.
inline double ball_volume(int dim, double r) {
  return sphere_measure(dim) * std::pow(r, dim) / dim;
}

}  // namespace nls
