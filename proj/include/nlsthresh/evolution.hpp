#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/fft.hpp"
#include "nlsthresh/functionals.hpp"
#include "nlsthresh/norms.hpp"
#include "nlsthresh/params.hpp"
#include "nlsthresh/profile.hpp"
#include "nlsthresh/thresholds.hpp"

namespace nls {

struct ObservableRecord {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double grad_sq = 0.0;
  double variance = 0.0;  // h(t) = ‖x u(t)‖²
  double Q = 0.0;
  double S = 0.0;
  double dt = 0.0;  // step size in use when the record was taken
  double virial_rate = 0.0;  // h'(t) = 4 Im ∫ ū x·∇u
  double boundary_fraction = 0.0;
  double tail_fraction = 0.0;
};

struct ObservableSeries {
  ModelParams params;
  std::vector<ObservableRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  const ObservableRecord& front() const { return records.front(); }
  const ObservableRecord& back() const { return records.back(); }
};

enum class RunStatus { GlobalOnWindow, BlowUpDetected, Undecided, DiagnosticsViolated };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::GlobalOnWindow: return "global-on-window";
    case RunStatus::BlowUpDetected: return "blow-up-detected";
    case RunStatus::Undecided: return "undecided";
    case RunStatus::DiagnosticsViolated: return "diagnostics-violated";
  }
  return "unknown";
}

struct DetectorOptions {
  double growth_factor = 1e6;    // (i) grad_sq > growth_factor · grad_sq(0)
  std::size_t window = 4;        // (ii) records in the concavity window
  double tail_threshold = 1e-3;  // (iii) spectral energy above 2/3 of k_max
};

struct DetectorReport {
  bool growth = false;
  bool concave = false;
  bool resolution_loss = false;
  bool fired() const { return growth && concave && resolution_loss; }
};

/// The three-part blow-up test on the records so far: (i) gradient growth,
/// (ii) h'' < 0 across the last window (differences of the virial rate h')
/// with h strictly decreasing, (iii) loss of spectral resolution.
inline DetectorReport blow_up_detector(const ObservableSeries& series, const DetectorOptions& opts = {}) {
  DetectorReport r;
  if (series.size() < 2) return r;
  const auto& rec = series.records;
  const auto& last = rec.back();
  r.growth = last.grad_sq > opts.growth_factor * rec.front().grad_sq;
  r.resolution_loss = last.tail_fraction > opts.tail_threshold;
  const std::size_t w = std::max<std::size_t>(opts.window, 2);
  if (rec.size() >= w) {
    r.concave = true;
    for (std::size_t k = rec.size() - w; k + 1 < rec.size(); ++k) {
      const double h2 = (rec[k + 1].virial_rate - rec[k].virial_rate) / (rec[k + 1].t - rec[k].t);
      if (!(h2 < 0.0) || !(rec[k + 1].variance < rec[k].variance)) r.concave = false;
    }
  }
  return r;
}

/// Fits grad_sq ≈ c·(T − t)^{−q} to the records of the last decade of growth
/// and returns T.
inline std::optional<double> estimate_blow_up_time(const ObservableSeries& series) {
  if (series.size() < 3) return std::nullopt;
  const auto& rec = series.records;
  const double top = rec.back().grad_sq;
  std::vector<double> ts, lg;
  for (double decade : {10.0, 100.0}) {
    ts.clear();
    lg.clear();
    for (const auto& r : rec) {
      if (r.grad_sq >= top / decade && r.grad_sq > 0.0) {
        ts.push_back(r.t);
        lg.push_back(std::log(r.grad_sq));
      }
    }
    if (ts.size() >= 4) break;
  }
  if (ts.size() < 3) return std::nullopt;
  const double t_last = ts.back();
  const double span = std::max(t_last - ts.front(), 1e-300);
  auto sse = [&](double T) {
    const std::size_t n = ts.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::log(T - ts[i]);
      sx += x;
      sy += lg[i];
      sxx += x * x;
      sxy += x * lg[i];
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    const double slope = (n * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / n;
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = lg[i] - (icpt + slope * std::log(T - ts[i]));
      e += d * d;
    }
    return e;
  };
  double lo = t_last + 1e-9 * span, hi = t_last + 2.0 * span;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = sse(x1), f2 = sse(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = sse(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = sse(x2);
    }
  }
  return 0.5 * (lo + hi);
}

struct EvolveOptions {
  /// dt = dt0·min(1, grad_sq(0)/grad_sq(t)) when set; fixed dt0 otherwise.
  bool adaptive = true;
  bool stop_on_blow_up = true;
  double boundary_tolerance = 1e-10;
  double dt_floor = 1e-14;
  /// Consecutive records with the spectral tail above the detector threshold,
  /// without the detector firing, after which the run stops as undecided (0 = never).
  std::size_t resolution_patience = 100;
  DetectorOptions detector;
  /// Called with the current state every `checkpoint_interval` time units (0 = never).
  double checkpoint_interval = 0.0;
  std::function<void(const WaveField&)> on_checkpoint;
};

struct RunOutcome {
  RunStatus status = RunStatus::Undecided;
  std::optional<double> blow_up_time_estimate;
  std::string reason;
  ObservableSeries series;
  WaveField final_state;
  bool negative_Q_seen = false;
  std::size_t steps = 0;
};

namespace detail {

/// e^{iθ} rounded to the neighbouring doubles whose modulus is closest to 1,
/// so that repeated multiplication does not bias the mass.
inline Complex unit_phase(double theta) {
  const long double th = theta;
  const double c0 = static_cast<double>(std::cos(th)), s0 = static_cast<double>(std::sin(th));
  Complex best(c0, s0);
  long double best_err = std::numeric_limits<long double>::infinity();
  for (int dc = -1; dc <= 1; ++dc) {
    const double c = dc == 0 ? c0 : std::nextafter(c0, dc * 2.0);
    for (int ds = -1; ds <= 1; ++ds) {
      const double s = ds == 0 ? s0 : std::nextafter(s0, ds * 2.0);
      const long double e = std::abs(static_cast<long double>(c) * c + static_cast<long double>(s) * s - 1.0L);
      if (e < best_err) {
        best_err = e;
        best = Complex(c, s);
      }
    }
  }
  return best;
}

/// Split-step propagator holding the spectral symbols of one grid.
class SplitStep {
 public:
  SplitStep(const CartesianGrid& g, const ModelParams& p)
      : grid_(g), params_(p), plan_(FftPlan::for_grid(g)), k2_(g.total_points()) {
    for (std::size_t i = 0; i < k2_.size(); ++i) {
      if (g.dim == 1) {
        k2_[i] = g.wavenumber(i) * g.wavenumber(i);
      } else {
        const double kx = g.wavenumber(i / g.points), ky = g.wavenumber(i % g.points);
        k2_[i] = kx * kx + ky * ky;
      }
    }
  }

  const FftPlan& plan() const { return *plan_; }

  /// Strang step on the spectrum: half kinetic, exact nonlinear phase, half kinetic.
  void step(std::vector<Complex>& spec, std::vector<Complex>& work, double dt) {
    kinetic(spec, dt / 2.0);
    work = spec;
    plan_->backward(work);
    const double lam = params_.lambda, half = params_.alpha / 2.0;
    if (lam != 0.0) {
      const double rounded = std::round(half);
      if (rounded == half && rounded >= 1.0 && rounded <= 8.0) {
        const int k = static_cast<int>(rounded);
        for (auto& u : work) {
          const double m2 = std::norm(u);
          double v = m2;
          for (int j = 1; j < k; ++j) v *= m2;
          u *= std::polar(1.0, lam * v * dt);
        }
      } else {
        for (auto& u : work) u *= std::polar(1.0, lam * std::pow(std::norm(u), half) * dt);
      }
    }
    plan_->forward(work);
    spec.swap(work);
    kinetic(spec, dt / 2.0);
  }

  double grad_sq(const std::vector<Complex>& spec) const { return spectral_grad_sq(grid_, spec); }

  /// Observables at time t from the spectrum.
  ObservableRecord observe(const std::vector<Complex>& spec, double t, double dt) const {
    ObservableRecord r;
    r.t = t;
    r.dt = dt;
    std::vector<Complex> u(spec);
    plan_->backward(u);
    const double dv = grid_.cell_volume();
    const double ap2 = params_.alpha + 2.0;
    double mass = 0.0, P = 0.0, var = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double m2 = std::norm(u[i]);
      mass += m2;
      P += std::pow(m2, ap2 / 2.0);
      var += radius_sq(i) * m2;
    }
    r.mass = mass * dv;
    r.variance = var * dv;
    r.grad_sq = grad_sq(spec);
    const double Pn = P * dv;
    r.energy = 0.5 * r.grad_sq - params_.lambda / ap2 * Pn;
    r.Q = r.grad_sq - params_.lambda * params_.dim * params_.alpha / (2.0 * ap2) * Pn;
    r.S = r.energy + 0.5 * params_.omega * r.mass;

    // h' = 4 Im ∫ ū x·∇u, with ∇u spectral.
    double rate = 0.0;
    for (int axis = 0; axis < grid_.dim; ++axis) {
      std::vector<Complex> d(spec);
      for (std::size_t i = 0; i < d.size(); ++i) {
        const std::size_t j = (grid_.dim == 1) ? i : (axis == 0 ? i / grid_.points : i % grid_.points);
        d[i] *= Complex(0.0, grid_.wavenumber(j));
      }
      plan_->backward(d);
      for (std::size_t i = 0; i < d.size(); ++i) {
        const std::size_t j = (grid_.dim == 1) ? i : (axis == 0 ? i / grid_.points : i % grid_.points);
        rate += grid_.coordinate(j) * (std::conj(u[i]) * d[i]).imag();
      }
    }
    r.virial_rate = 4.0 * rate * dv;

    WaveField tmp(grid_, std::move(u), params_, t);
    r.boundary_fraction = boundary_mass_fraction(tmp);
    r.tail_fraction = spectral_tail_fraction(grid_, spec);
    return r;
  }

 private:
  void kinetic(std::vector<Complex>& spec, double dt) {
    if (dt != cached_dt_) {
      phase_.resize(k2_.size());
      for (std::size_t i = 0; i < k2_.size(); ++i) phase_[i] = unit_phase(-k2_[i] * dt);
      cached_dt_ = dt;
    }
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= phase_[i];
  }

  double radius_sq(std::size_t idx) const {
    if (grid_.dim == 1) {
      const double x = grid_.coordinate(idx);
      return x * x;
    }
    const double x = grid_.coordinate(idx / grid_.points), y = grid_.coordinate(idx % grid_.points);
    return x * x + y * y;
  }

  CartesianGrid grid_;
  ModelParams params_;
  std::shared_ptr<const FftPlan> plan_;
  std::vector<double> k2_;
  std::vector<Complex> phase_;
  double cached_dt_ = std::numeric_limits<double>::quiet_NaN();
};

inline bool all_finite(const std::vector<Complex>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

}  // namespace detail

/// Strang split-step Fourier integration of i u_t + Δu + λ|u|^α u = 0 from
/// φ up to t_end, recording observables every `observer_stride` steps.
inline RunOutcome split_step_evolve(const WaveField& phi, const ModelParams& params, double t_end,
                                    double dt0, std::size_t observer_stride,
                                    const EvolveOptions& opts = {}) {
  phi.validate();
  params.validate();
  require(phi.grid.dim == params.dim, ErrorKind::InvalidInput, "field and model dimensions differ");
  require(std::isfinite(dt0) && dt0 > 0.0, ErrorKind::InvalidInput, "dt0 must be positive");
  require(std::isfinite(t_end) && t_end >= phi.time, ErrorKind::InvalidInput, "t_end before start");
  require(observer_stride >= 1, ErrorKind::InvalidInput, "observer stride must be >= 1");

  detail::SplitStep stepper(phi.grid, params);
  std::vector<Complex> spec(phi.values), work;
  stepper.plan().forward(spec);

  RunOutcome out;
  out.series.params = params;
  double t = phi.time;
  const double g0 = stepper.grad_sq(spec);
  double next_checkpoint = t + opts.checkpoint_interval;

  auto dt_for = [&](double g) {
    double dt = dt0;
    if (opts.adaptive && g > g0 && g0 > 0.0) dt = dt0 * g0 / g;
    return dt;
  };
  auto record = [&](double dt) {
    out.series.records.push_back(stepper.observe(spec, t, dt));
    // Q vanishes on ground states; roundoff below 1e-8·‖∇u‖² is not counted.
    const auto& last = out.series.records.back();
    if (last.Q < -1e-8 * last.grad_sq) out.negative_Q_seen = true;
  };
  auto finish = [&](RunStatus s, std::string why) {
    out.status = s;
    out.reason = std::move(why);
    std::vector<Complex> u(spec);
    stepper.plan().backward(u);
    out.final_state = WaveField(phi.grid, std::vector<Complex>(phi.grid.total_points()), params, t);
    out.final_state.values = std::move(u);
    if (s == RunStatus::BlowUpDetected) out.blow_up_time_estimate = estimate_blow_up_time(out.series);
    return out;
  };

  record(dt_for(g0));
  bool growth_and_concave = false;
  std::size_t since_record = 0, unresolved = 0;
  const double eps_t = 1e-12 * std::max(1.0, std::abs(t_end));
  while (t < t_end - eps_t) {
    double dt = opts.adaptive ? dt_for(stepper.grad_sq(spec)) : dt0;
    if (dt < opts.dt_floor) return finish(RunStatus::Undecided, "time step fell below the floor");
    if (t + dt > t_end) dt = t_end - t;
    stepper.step(spec, work, dt);
    t += dt;
    ++out.steps;
    if (!detail::all_finite(spec)) {
      if (growth_and_concave) return finish(RunStatus::BlowUpDetected, "numerical overflow after growth and concavity");
      return finish(RunStatus::Undecided, "numerical overflow");
    }
    if (opts.checkpoint_interval > 0.0 && opts.on_checkpoint && t >= next_checkpoint - 1e-9 * dt) {
      std::vector<Complex> u(spec);
      stepper.plan().backward(u);
      opts.on_checkpoint(WaveField(phi.grid, std::move(u), params, t));
      // One call per step at most, even when dt exceeds the interval.
      while (next_checkpoint <= t + 1e-9 * dt) next_checkpoint += opts.checkpoint_interval;
    }
    if (++since_record == observer_stride || t >= t_end - eps_t) {
      since_record = 0;
      record(dt);
      const auto& last = out.series.back();
      const DetectorReport rep = blow_up_detector(out.series, opts.detector);
      growth_and_concave = rep.growth && rep.concave;
      if (rep.fired() && opts.stop_on_blow_up) return finish(RunStatus::BlowUpDetected, "detector fired");
      if (last.boundary_fraction > opts.boundary_tolerance) {
        return finish(RunStatus::DiagnosticsViolated, "mass reached the box boundary");
      }
      unresolved = rep.resolution_loss ? unresolved + 1 : 0;
      if (opts.resolution_patience > 0 && unresolved >= opts.resolution_patience) {
        return finish(RunStatus::Undecided, "resolution lost before the growth criterion was met");
      }
    }
  }
  if (blow_up_detector(out.series, opts.detector).fired()) return finish(RunStatus::BlowUpDetected, "detector fired");
  if (out.negative_Q_seen) return finish(RunStatus::Undecided, "Q < 0 observed but no blow-up on the window");
  return finish(RunStatus::GlobalOnWindow, "reached t_end");
}

/// Residuals of h'' = 8Q and h'' = 4NαE − 2(Nα−4)‖∇u‖² at the interior
/// records, with h'' from fourth-order central differences of h.
struct VirialResiduals {
  std::vector<double> t;
  std::vector<double> h2;
  std::vector<double> res_8Q;
  std::vector<double> res_energy_form;
  double max_8Q() const { return res_8Q.empty() ? 0.0 : *std::max_element(res_8Q.begin(), res_8Q.end()); }
  double max_energy_form() const {
    return res_energy_form.empty() ? 0.0 : *std::max_element(res_energy_form.begin(), res_energy_form.end());
  }
};

inline VirialResiduals virial_residuals(const ObservableSeries& series) {
  const auto& r = series.records;
  require(r.size() >= 5, ErrorKind::InvalidInput, "virial residuals need at least 5 records");
  const double h = r[1].t - r[0].t;
  require(h > 0.0, ErrorKind::InvalidInput, "records must be increasing in time");
  for (std::size_t k = 1; k < r.size(); ++k) {
    require(std::abs((r[k].t - r[k - 1].t) - h) <= 1e-9 * h, ErrorKind::InvalidInput,
            "virial residuals need uniformly spaced records");
  }
  const auto& p = series.params;
  const double Na = p.dim * p.alpha;
  VirialResiduals out;
  for (std::size_t k = 2; k + 2 < r.size(); ++k) {
    const double h2 = (-r[k + 2].variance + 16.0 * r[k + 1].variance - 30.0 * r[k].variance +
                       16.0 * r[k - 1].variance - r[k - 2].variance) / (12.0 * h * h);
    const double scale = std::max(std::abs(h2), 1.0);
    out.t.push_back(r[k].t);
    out.h2.push_back(h2);
    out.res_8Q.push_back(std::abs(h2 - 8.0 * r[k].Q) / scale);
    out.res_energy_form.push_back(
        std::abs(h2 - (4.0 * Na * r[k].energy - 2.0 * (Na - 4.0) * r[k].grad_sq)) / scale);
  }
  return out;
}

/// f(x) = a − x + b·x^p bounding Φ(t) = ‖∇u(t)‖²: a = ‖∇φ‖²,
/// b = 2λ/(α+2)·C*·‖φ‖^{(4−α(N−2))/2}, p = Nα/4.
struct BootstrapBound {
  double a = 0.0;
  double b_coef = 0.0;
  double p = 0.0;
  double x_bar = 0.0;
  double b_star = 0.0;

  double f(double x) const { return a - x + b_coef * std::pow(x, p); }
  bool in_global_region() const { return a <= b_star; }
};

inline BootstrapBound make_bootstrap_bound(double mass, double grad_sq, const ThresholdSet& ts) {
  const auto& P = ts.params;
  P.require_supercritical();
  require(mass > 0.0 && grad_sq > 0.0, ErrorKind::InvalidInput, "bootstrap bound needs a nonzero datum");
  BootstrapBound b;
  b.a = grad_sq;
  b.p = P.dim * P.alpha / 4.0;
  b.b_coef = 2.0 * P.lambda / (P.alpha + 2.0) * ts.C_star * std::pow(std::sqrt(mass), P.sobolev_gap() / 2.0);
  b.x_bar = std::pow(b.b_coef * b.p, -1.0 / (b.p - 1.0));
  b.b_star = (b.p - 1.0) / b.p * b.x_bar;
  return b;
}

struct MonitorReport {
  bool passed = true;
  double margin = std::numeric_limits<double>::infinity();  // min over t of x̄ − ‖∇u‖²
  double min_f = std::numeric_limits<double>::infinity();
  double energy_margin = std::numeric_limits<double>::infinity();  // min of E(φ) − (Nα−4)/(2Nα)‖∇u‖²
  std::size_t violations = 0;
};

/// Checks f(‖∇u(t)‖²) > 0, ‖∇u(t)‖² < x̄ and E(φ) > (Nα−4)/(2Nα)‖∇u(t)‖² on every record.
inline MonitorReport bootstrap_monitor(const ObservableSeries& series, const BootstrapBound& bound) {
  require(bound.in_global_region(), ErrorKind::InvalidInput, "bootstrap monitor applies only when a <= b*");
  require(!series.empty(), ErrorKind::InvalidInput, "empty series");
  const auto& P = series.params;
  const double Na = P.dim * P.alpha;
  const double e0 = series.front().energy;
  MonitorReport rep;
  for (const auto& r : series.records) {
    const double fx = bound.f(r.grad_sq);
    const double gap = bound.x_bar - r.grad_sq;
    const double em = e0 - (Na - 4.0) / (2.0 * Na) * r.grad_sq;
    rep.min_f = std::min(rep.min_f, fx);
    rep.margin = std::min(rep.margin, gap);
    rep.energy_margin = std::min(rep.energy_margin, em);
    if (!(fx > 0.0) || !(gap > 0.0) || !(em > 0.0)) {
      rep.passed = false;
      ++rep.violations;
    }
  }
  return rep;
}

}  // namespace nls
