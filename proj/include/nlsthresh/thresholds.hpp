#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/params.hpp"

namespace nls {

/// Sharp Gagliardo–Nirenberg constant
///   C* = 2(α+2)/(Nα) · ((4−α(N−2))/(Nα))^{(Nα−4)/4} · ‖R‖^{−α}.
inline double gn_constant_formula(const ModelParams& p, double R_l2) {
  require(p.dim >= 1 && p.dim <= 3 && std::isfinite(p.alpha) && p.alpha > 0.0 &&
              p.sobolev_gap() > 0.0,
          ErrorKind::InvalidInput, "alpha outside (0, 4/(N-2))");
  require(std::isfinite(R_l2) && R_l2 > 0.0, ErrorKind::InvalidInput, "norm of R must be positive");
  const double Na = p.dim * p.alpha;
  return 2.0 * (p.alpha + 2.0) / Na * std::pow(p.sobolev_gap() / Na, (Na - 4.0) / 4.0) *
         std::pow(R_l2, -p.alpha);
}

struct ThresholdTriple {
  double gamma = 0.0;
  double r = 0.0;
  double rho = 0.0;
};

/// Threshold curves in the (‖∇φ‖, ‖φ‖) plane for one model. Evaluations are
/// carried out in log space.
struct ThresholdSet {
  ModelParams params;
  double R_l2 = 0.0;
  double C_star = 0.0;

  ThresholdSet() = default;
  ThresholdSet(const ModelParams& p, double r_l2)
      : params(p), R_l2(r_l2), C_star(gn_constant_formula(p, r_l2)) {
    require(p.lambda > 0.0 && std::isfinite(p.lambda), ErrorKind::InvalidInput,
            "thresholds need lambda > 0");
  }

  /// From the unit ground state (λ = ω = 1) of the same N, α.
  static ThresholdSet from_unit(const ModelParams& p, const GroundState& unit) {
    require(unit.params.dim == p.dim && std::abs(unit.params.alpha - p.alpha) < 1e-14,
            ErrorKind::InvalidInput, "ground state belongs to another model");
    return ThresholdSet(p, unit.l2());
  }

  /// λ^{−1/α}‖R‖, the mass norm of the ground state at ω = 1.
  double Lambda() const { return std::pow(params.lambda, -1.0 / params.alpha) * R_l2; }

  double gamma_star(double a) const { return std::exp(log_r_star(a) + gamma_log_ratio()); }
  double r_star(double a) const { return std::exp(log_r_star(a)); }
  double rho_star(double a) const { return std::exp(log_r_star(a) + rho_log_ratio()); }

  double gamma_star_inv(double a) const {
    return std::exp(log_r_star_inv(a) + 0.5 * std::log(gap() / Na()));
  }
  double r_star_inv(double a) const { return std::exp(log_r_star_inv(a)); }
  double rho_star_inv(double a) const {
    return std::exp(log_r_star_inv(a) + 2.0 / gap() * std::log(Na() / 4.0));
  }

  /// f(c·a) = c^{power_law_exponent()}·f(a) for γ*, r*, ρ*.
  double power_law_exponent() const { return -gap() / D(); }
  /// The same for the three inverse maps.
  double inverse_power_law_exponent() const { return -D() / gap(); }

 private:
  double Na() const { return params.dim * params.alpha; }
  double D() const { return params.sobolev_gap(); }
  double gap() const { return params.supercritical_gap(); }

  void check(double a) const {
    params.require_supercritical();
    require(std::isfinite(a) && a > 0.0, ErrorKind::InvalidInput, "threshold argument must be positive");
  }

  double gamma_log_ratio() const { return gap() / (2.0 * D()) * std::log(gap() / Na()); }
  double rho_log_ratio() const { return 2.0 / D() * std::log(Na() / 4.0); }

  double log_r_star(double a) const {
    check(a);
    return gap() / (2.0 * D()) * std::log(Na() / D()) + 2.0 * params.alpha / D() * std::log(Lambda()) -
           gap() / D() * std::log(a);
  }
  double log_r_star_inv(double a) const {
    check(a);
    return 0.5 * std::log(Na() / D()) + 2.0 * params.alpha / gap() * std::log(Lambda()) -
           D() / gap() * std::log(a);
  }
};

inline ThresholdTriple evaluate_thresholds(const ThresholdSet& ts, double a) {
  return {ts.gamma_star(a), ts.r_star(a), ts.rho_star(a)};
}

inline ThresholdTriple invert_thresholds(const ThresholdSet& ts, double a) {
  return {ts.gamma_star_inv(a), ts.r_star_inv(a), ts.rho_star_inv(a)};
}

enum class Region { GuaranteedGlobal, BlowUpConstructible, Gap };
enum class EnergySign { Negative, Zero, Positive };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::GuaranteedGlobal: return "guaranteed-global";
    case Region::BlowUpConstructible: return "blow-up-constructible";
    case Region::Gap: return "gap";
  }
  return "unknown";
}

inline const char* to_string(EnergySign s) {
  switch (s) {
    case EnergySign::Negative: return "negative";
    case EnergySign::Zero: return "zero";
    case EnergySign::Positive: return "positive";
  }
  return "unknown";
}

struct RegionLabel {
  Region region = Region::Gap;
  /// Sign of E along the constructed blow-up datum (blow-up-constructible only).
  std::optional<EnergySign> energy_sign;
};

/// Place (a, b) = (‖φ‖, ‖∇φ‖): global when a ≤ γ*(b), constructible blow-up
/// data when a > r*(b), gap otherwise.
inline RegionLabel classify_plane_point(const ThresholdSet& ts, double a, double b) {
  require(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0, ErrorKind::InvalidInput,
          "plane point needs a, b > 0");
  const ThresholdTriple t = evaluate_thresholds(ts, b);
  RegionLabel out;
  if (a <= t.gamma) {
    out.region = Region::GuaranteedGlobal;
  } else if (a > t.r) {
    out.region = Region::BlowUpConstructible;
    if (std::abs(a - t.rho) <= 1e-12 * t.rho) {
      out.energy_sign = EnergySign::Zero;
    } else {
      out.energy_sign = a < t.rho ? EnergySign::Positive : EnergySign::Negative;
    }
  } else {
    out.region = Region::Gap;
  }
  return out;
}

}  // namespace nls
