#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nlsthresh/nlsthresh.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  int dim = 1;
  double alpha = 8.0;
  double lambda = 1.0;
  double omega = 1.0;
  std::string config;
  std::string out = ".";
  bool reproducible = false;
  std::string cache_dir;
};

struct CommonFlags {
  CLI::Option* dim = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* omega = nullptr;
  CLI::Option* reproducible = nullptr;
};

nls::KeyValueConfig load_config(const Common& c) {
  if (c.config.empty()) return {};
  return nls::KeyValueConfig::load(c.config);
}

// Config values first, then anything given on the command line.
nls::ModelParams resolve_params(const Common& c, const CommonFlags& f, const nls::KeyValueConfig& kv) {
  nls::ModelParams p;
  p.dim = static_cast<int>(kv.get_int("dim", p.dim));
  p.alpha = kv.get_double("alpha", p.alpha);
  p.lambda = kv.get_double("lambda", p.lambda);
  p.omega = kv.get_double("omega", p.omega);
  if (f.dim->count()) p.dim = c.dim;
  if (f.alpha->count()) p.alpha = c.alpha;
  if (f.lambda->count()) p.lambda = c.lambda;
  if (f.omega->count()) p.omega = c.omega;
  p.validate();
  return p;
}

bool resolve_reproducible(const Common& c, const CommonFlags& f, const nls::KeyValueConfig& kv) {
  return f.reproducible->count() ? c.reproducible : kv.get_bool("reproducible", false);
}

fs::path out_dir(const Common& c) {
  fs::path d = c.out;
  fs::create_directories(d);
  return d;
}

std::string csv_of(const auto& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

nls::GroundState unit_ground_state(const nls::ModelParams& p, const Common& c) {
  if (c.cache_dir.empty()) return nls::solve_shooting(p.unit(), nls::default_radial_grid(1.0));
  return nls::cached_ground_state(p.unit(), nls::default_radial_grid(1.0), c.cache_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states, blow-up thresholds and split-step evolution for focusing NLS"};
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  CommonFlags f;
  f.dim = app.add_option("--dim", c.dim, "space dimension N (1, 2 or 3)");
  f.alpha = app.add_option("--alpha", c.alpha, "nonlinearity exponent");
  f.lambda = app.add_option("--lambda", c.lambda, "coupling constant");
  f.omega = app.add_option("--omega", c.omega, "ground-state frequency");
  app.add_option("--config", c.config, "key = value settings file (flags win)");
  app.add_option("--out", c.out, "output directory");
  f.reproducible = app.add_flag("--reproducible", c.reproducible, "omit timing columns from outputs");
  app.add_option("--cache-dir", c.cache_dir, "ground-state cache directory");

  auto* gs_cmd = app.add_subcommand("ground-state", "solve the stationary problem and certify it");
  std::string method = "shooting";
  std::size_t gs_points = 256;
  double gs_half_width = 0.0;
  gs_cmd->add_option("--method", method, "shooting or fixed-point")->check(CLI::IsMember({"shooting", "fixed-point"}));
  gs_cmd->add_option("--points", gs_points, "grid points per axis (fixed-point)");
  gs_cmd->add_option("--half-width", gs_half_width, "box half-width (fixed-point, 0 = automatic)");

  auto* th_cmd = app.add_subcommand("thresholds", "tabulate gamma*, r*, rho* and plot them");
  double th_min = 0.1, th_max = 10.0;
  std::size_t th_count = 50;
  th_cmd->add_option("--min", th_min, "smallest gradient norm");
  th_cmd->add_option("--max", th_max, "largest gradient norm");
  th_cmd->add_option("--count", th_count, "number of samples");

  auto* gn_cmd = app.add_subcommand("gn-constant", "sharp Gagliardo-Nirenberg constant, formula and minimization");
  std::size_t gn_points = 0;
  double gn_half_width = 0.0;
  gn_cmd->add_option("--points", gn_points, "grid points per axis (0 = 512 in 1D, 128 in 2D)");
  gn_cmd->add_option("--half-width", gn_half_width, "box half-width (0 = 20 in 1D, 16 in 2D)");

  auto* ev_cmd = app.add_subcommand("evolve", "evolve one datum and report its fate");
  double ev_a = 1.0, ev_b = 1.0, ev_t_end = 1.0, ev_dt = 1e-3, ev_half_width = 0.0, ev_checkpoint = 0.0;
  std::string ev_family = "gaussian";
  std::size_t ev_points = 0, ev_stride = 10;
  CLI::Option* a_opt = ev_cmd->add_option("--a", ev_a, "mass norm ||phi||");
  CLI::Option* b_opt = ev_cmd->add_option("--b", ev_b, "gradient norm ||grad phi||");
  CLI::Option* fam_opt = ev_cmd->add_option("--family", ev_family, "gaussian or phi_ab")
                             ->check(CLI::IsMember({"gaussian", "phi_ab"}));
  CLI::Option* t_opt = ev_cmd->add_option("--t-end", ev_t_end, "final time");
  CLI::Option* dt_opt = ev_cmd->add_option("--dt", ev_dt, "initial step size");
  ev_cmd->add_option("--points", ev_points, "grid points per axis (0 = family default)");
  ev_cmd->add_option("--half-width", ev_half_width, "box half-width (0 = automatic)");
  ev_cmd->add_option("--stride", ev_stride, "steps between observable records");
  ev_cmd->add_option("--checkpoint-every", ev_checkpoint, "time between checkpoints (0 = final only)");

  auto* sw_cmd = app.add_subcommand("sweep", "run the (a, b) plane sweep");
  unsigned sw_par = 0;
  sw_cmd->add_option("--parallelism", sw_par, "worker threads (0 = config or 1)");

  auto* vf_cmd = app.add_subcommand("verify", "run the invariant suite");
  double vf_scale = 1.0;
  bool vf_fast = false;
  vf_cmd->add_option("--scale-ground-state", vf_scale, "multiply the ground state before checking");
  vf_cmd->add_flag("--fast", vf_fast, "skip the minimization, dynamics and critical-limit checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const auto kv = load_config(c);
    if (c.cache_dir.empty()) c.cache_dir = kv.get_string("cache_dir", "");
    const nls::ModelParams p = resolve_params(c, f, kv);
    const bool reproducible = resolve_reproducible(c, f, kv);

    if (*gs_cmd) {
      p.validate_focusing();
      nls::GroundState gs;
      if (method == "shooting") {
        gs = nls::solve_shooting(p, nls::default_radial_grid(p.omega));
      } else {
        if (p.dim == 3) nls::fail(nls::ErrorKind::InvalidInput, "fixed-point solver runs in 1 or 2 dimensions");
        const double L = gs_half_width > 0.0 ? gs_half_width : 20.0 / std::sqrt(p.omega);
        gs = nls::solve_fixed_point(p, nls::CartesianGrid(p.dim, L, gs_points));
      }
      const auto pr = nls::pohozaev_residuals(gs);
      const auto dir = out_dir(c);
      nls::write_text(dir / "ground_state.csv", csv_of([&](std::ostream& s) { nls::write_profile_csv(gs.profile, s); }));
      std::cout << "method " << nls::to_string(gs.method) << '\n'
                << "peak " << nls::fmt_num(gs.profile.peak()) << '\n'
                << "mass " << nls::fmt_num(gs.norms.mass) << '\n'
                << "grad_sq " << nls::fmt_num(gs.norms.grad_sq) << '\n'
                << "lp_pow " << nls::fmt_num(gs.norms.lp_at(p.alpha + 2.0)) << '\n'
                << "residual_linf " << nls::fmt_num(gs.residual_linf) << '\n'
                << "pohozaev_max " << nls::fmt_num(pr.max()) << '\n';
      return 0;
    }

    if (*th_cmd) {
      p.require_supercritical();
      const auto unit = unit_ground_state(p, c);
      const auto ts = nls::ThresholdSet::from_unit(p, unit);
      const auto dir = out_dir(c);
      nls::write_text(dir / "thresholds.csv", csv_of([&](std::ostream& s) {
                        nls::write_thresholds_csv(ts, th_min, th_max, th_count, s);
                      }));
      if (th_max > th_min) nls::write_text(dir / "thresholds.svg", nls::threshold_plot_svg(ts, th_min, th_max));
      std::cout << "C_star " << nls::fmt_num(ts.C_star) << '\n'
                << "Lambda " << nls::fmt_num(ts.Lambda()) << '\n'
                << "power_law_exponent " << nls::fmt_num(ts.power_law_exponent()) << '\n';
      return 0;
    }

    if (*gn_cmd) {
      p.validate_focusing();
      const auto unit = unit_ground_state(p, c);
      const double formula = nls::gn_constant_formula(p, unit.l2());
      std::cout << "formula " << nls::fmt_num(formula) << '\n';
      if (p.dim <= 2) {
        const double L = gn_half_width > 0.0 ? gn_half_width : (p.dim == 1 ? 20.0 : 16.0);
        const std::size_t n = gn_points > 0 ? gn_points : (p.dim == 1 ? 512 : 128);
        const auto mn = nls::gn_constant_minimize(p, nls::CartesianGrid(p.dim, L, n));
        std::cout << "minimized " << nls::fmt_num(mn.constant) << '\n'
                  << "relative_difference " << nls::fmt_num(std::abs(mn.constant / formula - 1.0)) << '\n'
                  << "iterations " << mn.iterations << '\n';
      }
      return 0;
    }

    if (*ev_cmd) {
      if (!a_opt->count()) ev_a = kv.get_double("a", ev_a);
      if (!b_opt->count()) ev_b = kv.get_double("b", ev_b);
      if (!fam_opt->count()) ev_family = kv.get_string("family", ev_family);
      if (!t_opt->count()) ev_t_end = kv.get_double("t_end", ev_t_end);
      if (!dt_opt->count()) ev_dt = kv.get_double("dt", ev_dt);
      const auto family = nls::parse_family(ev_family);
      nls::ModelParams run = p;
      nls::WaveField datum;
      if (family == nls::DatumFamily::PhiAb) {
        p.require_supercritical();
        const auto unit = unit_ground_state(p, c);
        const auto ts = nls::ThresholdSet::from_unit(p, unit);
        const std::size_t n = ev_points > 0 ? ev_points : 131072;
        std::optional<nls::CartesianGrid> g;
        if (ev_half_width > 0.0) g = nls::CartesianGrid(p.dim, ev_half_width, n);
        auto cert = nls::make_phi_ab(ev_a, ev_b, ts, unit, g, n);
        run.omega = cert.omega;
        std::cout << "omega " << nls::fmt_num(cert.omega) << '\n'
                  << "beta " << nls::fmt_num(cert.beta) << '\n'
                  << "Q " << nls::fmt_num(cert.Q) << '\n'
                  << "S_minus_m " << nls::fmt_num(cert.S - cert.m) << '\n';
        datum = std::move(cert.field);
      } else {
        const std::size_t n = ev_points > 0 ? ev_points : (p.dim == 1 ? 8192 : 512);
        const auto g = ev_half_width > 0.0 ? nls::CartesianGrid(p.dim, ev_half_width, n)
                                           : nls::gaussian_grid(ev_a, ev_b, p.dim, ev_t_end, n);
        datum = nls::gaussian_with_norms(ev_a, ev_b, g, run);
      }
      const auto dir = out_dir(c);
      nls::EvolveOptions opts;
      std::size_t checkpoints = 0;
      if (ev_checkpoint > 0.0) {
        opts.checkpoint_interval = ev_checkpoint;
        opts.on_checkpoint = [&](const nls::WaveField& w) {
          char name[64];
          std::snprintf(name, sizeof name, "checkpoint_%04zu.nlsf", checkpoints++);
          nls::write_checkpoint(w, dir / name);
        };
      }
      const auto outcome = nls::split_step_evolve(datum, run, ev_t_end, ev_dt, ev_stride, opts);
      nls::write_text(dir / "observables.csv",
                      csv_of([&](std::ostream& s) { nls::write_observables_csv(outcome.series, s); }));
      nls::write_checkpoint(outcome.final_state, dir / "final.nlsf");
      std::cout << "status " << nls::to_string(outcome.status) << '\n'
                << "final_time " << nls::fmt_num(outcome.series.back().t) << '\n'
                << "steps " << outcome.steps << '\n';
      if (outcome.blow_up_time_estimate) std::cout << "blow_up_time " << nls::fmt_num(*outcome.blow_up_time_estimate) << '\n';
      if (!outcome.reason.empty()) std::cout << "reason " << outcome.reason << '\n';
      return 0;
    }

    if (*sw_cmd) {
      nls::SweepConfig cfg;
      cfg.apply(kv);
      cfg.params = p;
      cfg.reproducible = reproducible;
      if (sw_par > 0) cfg.parallelism = sw_par;
      if (!c.cache_dir.empty()) cfg.cache_dir = c.cache_dir;
      const auto dir = out_dir(c);
      cfg.csv_path = dir / "sweep.csv";
      const auto res = nls::run_sweep(cfg);
      nls::write_text(dir / "sweep.svg",
                      nls::threshold_plot_svg(res.thresholds, std::min(cfg.b_range.lo, cfg.b_range.hi / 2.0),
                                              std::max(cfg.b_range.hi, cfg.b_range.lo * 2.0), res.points));
      std::size_t agree = 0, undecided = 0;
      for (const auto& pt : res.points) {
        if (pt.status == nls::RunStatus::Undecided) ++undecided;
        if ((pt.label.region == nls::Region::GuaranteedGlobal && pt.status == nls::RunStatus::GlobalOnWindow) ||
            (pt.label.region == nls::Region::BlowUpConstructible && pt.datum == nls::DatumFamily::PhiAb &&
             pt.status == nls::RunStatus::BlowUpDetected)) {
          ++agree;
        }
      }
      std::cout << "points " << res.points.size() << '\n'
                << "agreeing_with_theory " << agree << '\n'
                << "undecided " << undecided << '\n';
      return 0;
    }

    if (*vf_cmd) {
      nls::VerifyOptions vo;
      vo.params = p;
      vo.ground_state_scale = vf_scale;
      if (vf_fast) vo.critical_limit = vo.gn_minimization = vo.dynamics = false;
      const auto rep = nls::run_verify(vo);
      rep.print(std::cout);
      const auto dir = out_dir(c);
      std::ostringstream s;
      rep.print(s);
      nls::write_text(dir / "verify.txt", s.str());
      return rep.passed() ? 0 : 1;
    }
  } catch (const nls::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case nls::ErrorKind::InvalidInput:
      case nls::ErrorKind::UnsupportedRegime:
      case nls::ErrorKind::PreconditionViolation:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
