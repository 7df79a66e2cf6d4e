#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/evolution.hpp"
#include "nlsthresh/functionals.hpp"
#include "nlsthresh/gn_minimize.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/initial_data.hpp"
#include "nlsthresh/io.hpp"
#include "nlsthresh/sweep.hpp"
#include "nlsthresh/thresholds.hpp"

namespace nls {

enum class CheckStatus { Pass, Fail, Skipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIP";
  }
  return "?";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  double value = 0.0;      // measured quantity (residual, deviation, margin)
  double tolerance = 0.0;  // bound it was compared with
  std::string detail;
};

struct VerifyReport {
  ModelParams params;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (c.status == CheckStatus::Fail) return false;
    }
    return true;
  }
  void print(std::ostream& out) const {
    for (const auto& c : checks) {
      out << to_string(c.status) << "  " << c.name;
      if (c.status != CheckStatus::Skipped) out << "  value=" << fmt_num(c.value) << " tol=" << fmt_num(c.tolerance);
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << '\n';
    }
  }
};

struct VerifyOptions {
  ModelParams params{1, 8.0, 1.0, 1.0};
  /// Multiplies the ground-state profile before the checks (1 = untouched).
  double ground_state_scale = 1.0;
  /// Include the α ↘ 4/N convergence check (three extra ground states).
  bool critical_limit = true;
  /// Include the Gagliardo–Nirenberg minimization cross-check.
  bool gn_minimization = true;
  /// Include the short evolution runs (virial, conservation, bootstrap).
  bool dynamics = true;
};

namespace detail {

inline CheckResult bound_check(std::string name, double value, double tol, std::string detail = "") {
  CheckResult c{std::move(name), value < tol ? CheckStatus::Pass : CheckStatus::Fail, value, tol, std::move(detail)};
  if (!std::isfinite(value)) c.status = CheckStatus::Fail;
  return c;
}

inline CheckResult skipped(std::string name, std::string why) {
  return CheckResult{std::move(name), CheckStatus::Skipped, 0.0, 0.0, std::move(why)};
}

}  // namespace detail

/// Runs the invariant suite for one model and collects pass/fail/skip lines.
/// Checks that only make sense for α > 4/N are skipped otherwise.
inline VerifyReport run_verify(const VerifyOptions& opts = {}) {
  using detail::bound_check;
  using detail::skipped;
  VerifyReport rep;
  const ModelParams p = opts.params;
  rep.params = p;
  p.validate_focusing();
  const bool super = p.is_supercritical();
  const char* super_only = "needs alpha > 4/N";

  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      rep.checks.push_back(CheckResult{name, CheckStatus::Fail, NAN, 0.0, e.what()});
    }
  };

  // Ground state for (λ, ω) and the unit one.
  const GroundState unit = solve_shooting(p.unit(), default_radial_grid(1.0));
  GroundState gs = rescale_unit_to_model(unit, p.omega, p.lambda);
  if (opts.ground_state_scale != 1.0) {
    for (double& v : gs.profile.values) v *= opts.ground_state_scale;
    gs.norms = radial_norms(gs.profile, {p.alpha + 2.0}, true);
  }
  const auto pr = pohozaev_residuals(gs);
  rep.checks.push_back(bound_check("pohozaev-identity-1", pr.res1, 1e-6));
  rep.checks.push_back(bound_check("pohozaev-identity-2", pr.res2, 1e-6));
  rep.checks.push_back(bound_check("pohozaev-identity-3", pr.res3, 1e-6));
  rep.checks.push_back(bound_check("equation-residual", equation_residual(gs.profile, p), 1e-8));

  if (p.dim == 1) {
    double err = 0.0;
    const double amp = std::pow(p.omega / p.lambda, 1.0 / p.alpha), k = std::sqrt(p.omega);
    for (std::size_t j = 0; j < gs.profile.values.size(); ++j) {
      err = std::max(err, std::abs(gs.profile.values[j] - amp * soliton_1d(p.alpha, k * gs.profile.grid.node(j))));
    }
    rep.checks.push_back(bound_check("closed-form-soliton", err, 1e-6, "sup error"));
  } else {
    rep.checks.push_back(skipped("closed-form-soliton", "closed form known for N = 1 only"));
  }

  const double C = gn_constant_formula(p, unit.l2());
  if (opts.gn_minimization && p.dim <= 2) {
    guarded("gn-constant-minimization", [&] {
      const CartesianGrid g = p.dim == 1 ? CartesianGrid(1, 20.0, 512) : CartesianGrid(2, 16.0, 128);
      const auto mn = gn_constant_minimize(p, g);
      rep.checks.push_back(bound_check("gn-constant-minimization", std::abs(mn.constant / C - 1.0), 5e-3,
                                       "relative difference to the closed form"));
    });
  } else {
    rep.checks.push_back(skipped("gn-constant-minimization", p.dim > 2 ? "minimizer runs in N <= 2" : "disabled"));
  }
  rep.checks.push_back(bound_check("gn-constant-weinstein", std::abs(weinstein_J(unit.norms, p.unit()) * C - 1.0),
                                   1e-6, "J(R) C* - 1"));

  const double Qgs = constraint_Q(gs.norms, p);
  rep.checks.push_back(bound_check("ground-state-Q", std::abs(Qgs) / gs.norms.grad_sq, 1e-8, "relative to grad_sq"));

  if (super) {
    const ThresholdSet ts(p, unit.l2());
    double inv = 0.0, order_viol = 0.0, ratio = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double a = std::pow(10.0, -2.0 + 4.0 * k / 99.0);
      const auto t = evaluate_thresholds(ts, a);
      inv = std::max({inv, std::abs(ts.r_star(ts.r_star_inv(a)) / a - 1.0),
                      std::abs(ts.gamma_star(ts.gamma_star_inv(a)) / a - 1.0),
                      std::abs(ts.rho_star(ts.rho_star_inv(a)) / a - 1.0)});
      if (!(t.gamma < t.r && t.r < t.rho)) order_viol += 1.0;
      const double Na = p.dim * p.alpha, gap = p.supercritical_gap(), D = p.sobolev_gap();
      ratio = std::max(ratio, std::abs(t.gamma / t.r / std::pow(gap / Na, gap / (2.0 * D)) - 1.0));
    }
    rep.checks.push_back(bound_check("threshold-inverse-pairs", inv, 1e-12));
    rep.checks.push_back(bound_check("threshold-ordering", order_viol, 0.5, "violations among 100 points"));
    rep.checks.push_back(bound_check("threshold-gamma-ratio", ratio, 1e-12));

    rep.checks.push_back(bound_check("ground-state-beta-star", std::abs(beta_star(gs.norms, p) - 1.0), 1e-8));
    const double m = action_S(gs.norms, p);
    double worst = -INFINITY;
    for (double beta : {0.5, 2.0}) {
      const RadialProfile d = dilate_P(beta, gs.profile);
      worst = std::max(worst, action_S(d, p) - m);
    }
    rep.checks.push_back(bound_check("action-maximal-at-ground-state", worst + 1e-8, 0.0,
                                     "max over beta in {0.5, 2} of S(P(beta,psi)) - m, plus margin"));
  } else {
    for (const char* n : {"threshold-inverse-pairs", "threshold-ordering", "threshold-gamma-ratio",
                          "ground-state-beta-star", "action-maximal-at-ground-state"}) {
      rep.checks.push_back(skipped(n, super_only));
    }
  }

  if (opts.dynamics && p.dim <= 2) {
    guarded("virial-identity", [&] {
      const CartesianGrid g = p.dim == 1 ? CartesianGrid(1, 20.0, 1024) : CartesianGrid(2, 12.0, 128);
      const WaveField phi = gaussian_with_norms(1.0, 1.0, g, p);
      EvolveOptions eo;
      eo.adaptive = false;
      const auto run = split_step_evolve(phi, p, 0.1, 1e-4, 10, eo);
      const auto vr = virial_residuals(run.series);
      rep.checks.push_back(bound_check("virial-identity", vr.max_8Q(), 1e-3, "max |h'' - 8Q| / max(|h''|,1)"));
    });
    guarded("conservation", [&] {
      const CartesianGrid g = p.dim == 1 ? CartesianGrid(1, 40.0, 2048) : CartesianGrid(2, 16.0, 128);
      const WaveField phi = gaussian_with_norms(1.0, 1.0, g, p);
      EvolveOptions eo;
      eo.adaptive = false;
      const auto run = split_step_evolve(phi, p, 1.0, 1e-4, 1000, eo);
      double dm = 0.0, de = 0.0;
      const auto& r0 = run.series.front();
      for (const auto& r : run.series.records) {
        dm = std::max(dm, std::abs(r.mass / r0.mass - 1.0));
        de = std::max(de, std::abs(r.energy - r0.energy) / std::max(std::abs(r0.energy), r0.grad_sq));
      }
      rep.checks.push_back(bound_check("mass-conservation", dm, 1e-12));
      rep.checks.push_back(bound_check("energy-conservation", de, 1e-6));
    });
    if (super) {
      guarded("bootstrap-monitor", [&] {
        const ThresholdSet ts(p, unit.l2());
        const double b = 1.0, a = 0.9 * ts.gamma_star(b);
        const CartesianGrid g = p.dim == 1 ? gaussian_grid(a, b, 1, 1.0, 1024) : gaussian_grid(a, b, 2, 1.0, 128);
        const WaveField phi = gaussian_with_norms(a, b, g, p);
        const auto bound = make_bootstrap_bound(a * a, b * b, ts);
        rep.checks.push_back(bound_check("bootstrap-x-bar-identity",
                                         std::abs(bound.x_bar / std::pow(ts.r_star_inv(a), 2.0) - 1.0), 1e-10));
        EvolveOptions eo;
        eo.adaptive = false;
        const auto run = split_step_evolve(phi, p, 1.0, 1e-3, 10, eo);
        const auto mon = bootstrap_monitor(run.series, bound);
        rep.checks.push_back(CheckResult{"bootstrap-monitor", mon.passed ? CheckStatus::Pass : CheckStatus::Fail,
                                         mon.margin, 0.0, "min over t of x_bar - grad_sq (must stay positive)"});
      });
    } else {
      rep.checks.push_back(skipped("bootstrap-x-bar-identity", super_only));
      rep.checks.push_back(skipped("bootstrap-monitor", super_only));
    }
  } else {
    for (const char* n : {"virial-identity", "mass-conservation", "energy-conservation"}) {
      rep.checks.push_back(skipped(n, p.dim > 2 ? "evolution runs in N <= 2" : "disabled"));
    }
  }

  if (opts.critical_limit) {
    guarded("critical-limit", [&] {
      double prev_g = INFINITY, prev_r = INFINITY;
      bool mono = true;
      double last = 0.0;
      const double crit = 4.0 / p.dim;
      for (double d : {0.2, 0.1, 0.05}) {
        const ModelParams q{p.dim, crit + d, p.lambda, 1.0};
        const GroundState Rq = solve_shooting(q.unit(), default_radial_grid(1.0));
        const ThresholdSet ts(q, Rq.l2());
        const double lam = ts.Lambda();
        const double dg = std::abs(ts.gamma_star(1.0) - lam), dr = std::abs(ts.r_star(1.0) - lam);
        mono = mono && dg < prev_g && dr < prev_r;
        prev_g = dg;
        prev_r = dr;
        last = std::max(dg, dr);
      }
      rep.checks.push_back(CheckResult{"critical-limit", mono ? CheckStatus::Pass : CheckStatus::Fail, last, 0.0,
                                       "|gamma*(1) - Lambda| and |r*(1) - Lambda| decrease as alpha -> 4/N"});
    });
  }
  return rep;
}

}  // namespace nls
