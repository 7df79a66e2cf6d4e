#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nlsthresh/config.hpp"
#include "nlsthresh/errors.hpp"
#include "nlsthresh/evolution.hpp"
#include "nlsthresh/initial_data.hpp"
#include "nlsthresh/io.hpp"
#include "nlsthresh/thresholds.hpp"

namespace nls {

enum class DatumFamily { PhiAb, Gaussian };

inline const char* to_string(DatumFamily f) { return f == DatumFamily::PhiAb ? "phi_ab" : "gaussian"; }

inline DatumFamily parse_family(const std::string& s) {
  if (s == "phi_ab") return DatumFamily::PhiAb;
  if (s == "gaussian") return DatumFamily::Gaussian;
  fail(ErrorKind::InvalidInput, "unknown datum family '" + s + "' (phi_ab or gaussian)");
}

/// Log-spaced samples; a single sample sits at `lo`.
struct LogRange {
  double lo = 1.0;
  double hi = 1.0;
  std::size_t count = 1;

  double at(std::size_t i) const {
    if (count == 1) return lo;
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) /
                                       static_cast<double>(count - 1));
  }
  void validate(const char* name) const {
    require(std::isfinite(lo) && std::isfinite(hi) && lo > 0.0 && hi >= lo && count >= 1,
            ErrorKind::InvalidInput, std::string(name) + " range must be positive with count >= 1");
  }
};

struct SweepConfig {
  ModelParams params;
  LogRange a_range{0.5, 2.0, 3};
  LogRange b_range{0.5, 2.0, 3};
  double t_end = 10.0;
  double dt0 = 1e-3;
  std::size_t observer_stride = 10;
  /// Gaussian data: box half-width (0 = sized from the spreading width at t_end) and
  /// points (0 = 8192 in 1D, 512 in 2D).
  double gaussian_half_width = 0.0;
  std::size_t gaussian_points = 0;
  /// φ_{a,b} data: box half-width (0 = automatic) and points.
  double phi_half_width = 0.0;
  std::size_t phi_points = 131072;
  /// Step size for φ_{a,b} runs (0 = dt0 scaled by the datum's time scale 1/(β²ω), capped at dt0).
  double phi_dt0 = 0.0;
  DatumFamily family = DatumFamily::PhiAb;
  std::filesystem::path csv_path;
  std::filesystem::path svg_path;
  std::filesystem::path cache_dir;
  unsigned parallelism = 1;
  bool reproducible = false;

  void validate() const {
    params.validate_focusing();
    params.require_supercritical();
    require(params.dim == 1 || params.dim == 2, ErrorKind::InvalidInput, "sweeps evolve in 1 or 2 dimensions");
    a_range.validate("a");
    b_range.validate("b");
    require(t_end > 0.0 && dt0 > 0.0 && phi_dt0 >= 0.0 && observer_stride >= 1, ErrorKind::InvalidInput,
            "t_end, dt0 and the observer stride must be positive");
    require(parallelism >= 1, ErrorKind::InvalidInput, "parallelism must be >= 1");
  }

  /// Reads the keys a_min, a_max, a_count, b_min, b_max, b_count, t_end, dt,
  /// stride, family, gaussian_points, gaussian_half_width, phi_points,
  /// phi_half_width, phi_dt, parallelism, reproducible, dim, alpha, lambda,
  /// omega, cache_dir; anything absent keeps its current value.
  void apply(const KeyValueConfig& c) {
    params.dim = static_cast<int>(c.get_int("dim", params.dim));
    params.alpha = c.get_double("alpha", params.alpha);
    params.lambda = c.get_double("lambda", params.lambda);
    params.omega = c.get_double("omega", params.omega);
    a_range.lo = c.get_double("a_min", a_range.lo);
    a_range.hi = c.get_double("a_max", a_range.hi);
    a_range.count = static_cast<std::size_t>(c.get_int("a_count", static_cast<long long>(a_range.count)));
    b_range.lo = c.get_double("b_min", b_range.lo);
    b_range.hi = c.get_double("b_max", b_range.hi);
    b_range.count = static_cast<std::size_t>(c.get_int("b_count", static_cast<long long>(b_range.count)));
    t_end = c.get_double("t_end", t_end);
    dt0 = c.get_double("dt", dt0);
    observer_stride = static_cast<std::size_t>(c.get_int("stride", static_cast<long long>(observer_stride)));
    family = parse_family(c.get_string("family", to_string(family)));
    gaussian_points = static_cast<std::size_t>(c.get_int("gaussian_points", static_cast<long long>(gaussian_points)));
    gaussian_half_width = c.get_double("gaussian_half_width", gaussian_half_width);
    phi_points = static_cast<std::size_t>(c.get_int("phi_points", static_cast<long long>(phi_points)));
    phi_half_width = c.get_double("phi_half_width", phi_half_width);
    phi_dt0 = c.get_double("phi_dt", phi_dt0);
    parallelism = static_cast<unsigned>(c.get_int("parallelism", parallelism));
    reproducible = c.get_bool("reproducible", reproducible);
    cache_dir = c.get_string("cache_dir", cache_dir.string());
  }
};

struct SweepPoint {
  std::size_t i = 0;  // a index
  std::size_t j = 0;  // b index
  double a = 0.0;
  double b = 0.0;
  RegionLabel label;
  ThresholdTriple thresholds;  // γ*(b), r*(b), ρ*(b)
  DatumFamily datum = DatumFamily::Gaussian;
  std::optional<EnergySign> energy_sign;  // sign of E(φ) of the datum actually evolved
  RunStatus status = RunStatus::Undecided;
  std::optional<double> blow_up_time;
  double final_time = 0.0;
  double max_grad_ratio = 0.0;
  std::string reason;
  double wall_seconds = 0.0;
};

struct SweepResult {
  SweepConfig config;
  ThresholdSet thresholds;
  std::vector<SweepPoint> points;  // row-major over (a, b)
};

/// Box for a Gaussian of width 1/ν spreading freely up to t_end. The margin is
/// twice what free spreading needs: the nonlinearity radiates faster components.
inline CartesianGrid gaussian_grid(double a, double b, int dim, double t_end, std::size_t points) {
  const double nu = b / a * std::sqrt(2.0 / dim);
  const double s0 = 1.0 / nu;
  const double s1 = s0 * std::sqrt(1.0 + std::pow(2.0 * t_end / (s0 * s0), 2.0));
  return CartesianGrid(dim, 16.0 * std::max(s0, s1), points);
}

inline EnergySign sign_of(double e, double scale) {
  if (std::abs(e) <= 1e-8 * scale) return EnergySign::Zero;
  return e > 0.0 ? EnergySign::Positive : EnergySign::Negative;
}

inline SweepPoint run_sweep_point(const SweepConfig& cfg, const ThresholdSet& ts, const GroundState& R_unit,
                                  std::size_t i, std::size_t j) {
  const auto started = std::chrono::steady_clock::now();
  SweepPoint pt;
  pt.i = i;
  pt.j = j;
  pt.a = cfg.a_range.at(i);
  pt.b = cfg.b_range.at(j);
  pt.label = classify_plane_point(ts, pt.a, pt.b);
  pt.thresholds = evaluate_thresholds(ts, pt.b);
  try {
    WaveField datum;
    double dt0 = cfg.dt0;
    ModelParams run = cfg.params;
    if (cfg.family == DatumFamily::PhiAb && pt.label.region == Region::BlowUpConstructible) {
      pt.datum = DatumFamily::PhiAb;
      std::optional<CartesianGrid> g;
      if (cfg.phi_half_width > 0.0) g = CartesianGrid(cfg.params.dim, cfg.phi_half_width, cfg.phi_points);
      auto cert = make_phi_ab(pt.a, pt.b, ts, R_unit, g, cfg.phi_points);
      run.omega = cert.omega;
      datum = std::move(cert.field);
      dt0 = cfg.phi_dt0 > 0.0 ? cfg.phi_dt0 : cfg.dt0 * std::min(1.0, 1.0 / (cert.beta * cert.beta * cert.omega));
    } else {
      pt.datum = DatumFamily::Gaussian;
      const std::size_t n = cfg.gaussian_points > 0 ? cfg.gaussian_points : (cfg.params.dim == 1 ? 8192 : 512);
      const CartesianGrid g = cfg.gaussian_half_width > 0.0 ? CartesianGrid(cfg.params.dim, cfg.gaussian_half_width, n)
                                                            : gaussian_grid(pt.a, pt.b, cfg.params.dim, cfg.t_end, n);
      datum = gaussian_with_norms(pt.a, pt.b, g, run);
    }
    EvolveOptions opts;
    const RunOutcome out = split_step_evolve(datum, run, cfg.t_end, dt0, cfg.observer_stride, opts);
    const auto& first = out.series.front();
    pt.energy_sign = sign_of(first.energy, first.grad_sq);
    pt.status = out.status;
    pt.blow_up_time = out.blow_up_time_estimate;
    pt.final_time = out.series.back().t;
    double gmax = 0.0;
    for (const auto& r : out.series.records) gmax = std::max(gmax, r.grad_sq);
    pt.max_grad_ratio = gmax / first.grad_sq;
    pt.reason = out.reason;
  } catch (const Error& e) {
    pt.status = RunStatus::Undecided;
    pt.reason = e.what();
  }
  pt.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return pt;
}

/// One row per grid point. Outside reproducible mode a wall_seconds column
/// is appended; everything else is a function of the configuration alone.
inline std::string sweep_csv(const SweepResult& r) {
  const bool timing = !r.config.reproducible;
  std::ostringstream out;
  out << "a,b,region,energy_sign,datum,status,blow_up_time,gamma_star_b,r_star_b,rho_star_b,"
         "max_grad_ratio,final_time,reason"
      << (timing ? ",wall_seconds\n" : "\n");
  for (const auto& p : r.points) {
    std::string reason = p.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    out << fmt_num(p.a) << ',' << fmt_num(p.b) << ',' << to_string(p.label.region) << ','
        << (p.energy_sign ? to_string(*p.energy_sign) : "") << ',' << to_string(p.datum) << ','
        << to_string(p.status) << ',' << (p.blow_up_time ? fmt_num(*p.blow_up_time) : "") << ','
        << fmt_num(p.thresholds.gamma) << ',' << fmt_num(p.thresholds.r) << ',' << fmt_num(p.thresholds.rho)
        << ',' << fmt_num(p.max_grad_ratio) << ',' << fmt_num(p.final_time) << ',' << reason;
    if (timing) out << ',' << fmt_num(p.wall_seconds);
    out << '\n';
  }
  return out.str();
}

/// Runs every (a, b) grid point on a pool of `parallelism` workers. Results
/// are stored by grid position, so the output order (row-major, a outer) and
/// content do not depend on scheduling.
inline SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const GroundState R_unit = cached_ground_state(cfg.params.unit(), default_radial_grid(1.0), cfg.cache_dir);
  SweepResult res;
  res.config = cfg;
  res.thresholds = ThresholdSet::from_unit(cfg.params, R_unit);
  const std::size_t na = cfg.a_range.count, nb = cfg.b_range.count, total = na * nb;
  res.points.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
      res.points[k] = run_sweep_point(cfg, res.thresholds, R_unit, k / nb, k % nb);
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(cfg.parallelism, total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!cfg.csv_path.empty()) write_text(cfg.csv_path, sweep_csv(res));
  return res;
}

}  // namespace nls
