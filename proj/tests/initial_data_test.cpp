#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nlsthresh/functionals.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/initial_data.hpp"
#include "nlsthresh/thresholds.hpp"
#include "test_util.hpp"

using namespace nls;
using testutil::expect_kind;
using testutil::rel;
using testutil::sample_radial;

namespace {

struct Model {
  ModelParams p;
  GroundState unit;
  ThresholdSet ts;
};

const Model& octic() {
  static const Model m = [] {
    const ModelParams p{1, 8.0, 1.0, 1.0};
    auto unit = unit_ground_state(1, 8.0);
    const auto ts = ThresholdSet::from_unit(p, unit);
    return Model{p, std::move(unit), ts};
  }();
  return m;
}

const Model& quintic_strong() {
  static const Model m = [] {
    const ModelParams p{1, 5.0, 2.5, 1.0};
    auto unit = unit_ground_state(1, 5.0);
    const auto ts = ThresholdSet::from_unit(p, unit);
    return Model{p, std::move(unit), ts};
  }();
  return m;
}

const Model& planar_cubic() {
  static const Model m = [] {
    const ModelParams p{2, 3.0, 1.0, 1.0};
    auto unit = unit_ground_state(2, 3.0);
    const auto ts = ThresholdSet::from_unit(p, unit);
    return Model{p, std::move(unit), ts};
  }();
  return m;
}

// E(φ_{a,b}) = b²/(2Nα)·(Nα − 4β^{(Nα−4)/2}).
double energy_formula(const ModelParams& p, double b, double beta) {
  const double Na = p.dim * p.alpha;
  return b * b / (2.0 * Na) * (Na - 4.0 * std::pow(beta, (Na - 4.0) / 2.0));
}

}  // namespace

TEST(PhiAb, ScalarsAndNorms) {
  for (const Model* m : {&octic(), &quintic_strong()}) {
    const auto& ts = m->ts;
    const double b = 1.3;
    const double a = 1.2 * ts.r_star(b);
    const auto c = make_phi_ab(a, b, ts, m->unit, std::nullopt, 4096);
    const double N = m->p.dim, al = m->p.alpha;
    const double r_inv = ts.r_star_inv(a);
    EXPECT_LT(rel(c.beta, b / r_inv), 1e-14);
    EXPECT_GT(c.beta, 1.0);
    // Both displayed forms of ω agree, and ν is the ground-state amplitude ω^{1/α}.
    EXPECT_LT(rel(c.omega, r_inv * r_inv * (4.0 - al * (N - 2.0)) / (N * al) / (a * a)), 1e-12);
    EXPECT_LT(rel(c.nu, std::pow(c.omega, 1.0 / al)), 1e-12);
    EXPECT_LT(rel(c.psi.l2(), a), 1e-6);
    EXPECT_LT(rel(c.psi.norms.grad_l2(), r_inv), 1e-6);
    EXPECT_LT(rel(c.norms.l2(), a), 1e-6);
    EXPECT_LT(rel(c.norms.grad_l2(), b), 1e-6);
    const auto fn = field_norms(c.field, {al + 2.0});
    EXPECT_LT(rel(fn.l2(), a), 1e-6);
    EXPECT_LT(rel(fn.grad_l2(), b), 1e-6);
    EXPECT_LT(rel(fn.lp_at(al + 2.0), c.norms.lp_at(al + 2.0)), 1e-6);
  }
}

TEST(PhiAb, EnergyFormula) {
  for (const Model* m : {&octic(), &quintic_strong(), &planar_cubic()}) {
    for (double b : {0.5, 2.0}) {
      for (double f : {1.05, 1.5, 3.0}) {
        const double a = f * m->ts.r_star(b);
        const auto c = make_phi_ab(a, b, m->ts, m->unit, std::nullopt, m->p.dim == 1 ? 2048 : 128);
        EXPECT_LT(rel(c.energy, energy_formula(m->p, b, c.beta)), 1e-6) << m->p.dim << " " << b << " " << f;
        const double Na = m->p.dim * m->p.alpha;
        EXPECT_LT(c.energy, (Na - 4.0) / (2.0 * Na) * c.norms.grad_sq);
        EXPECT_LT(c.Q, 0.0);
        EXPECT_LT(c.S, c.m);
      }
    }
  }
}

TEST(PhiAb, ZeroEnergyAtRhoStar) {
  for (const Model* m : {&octic(), &quintic_strong()}) {
    for (double b : {0.7, 1.0, 3.0}) {
      const auto c = make_phi_ab(m->ts.rho_star(b), b, m->ts, m->unit, std::nullopt, 1024);
      EXPECT_LT(std::abs(c.energy), 1e-8 * c.norms.grad_sq) << b;
    }
  }
}

TEST(PhiAb, ConstraintVanishesAsBetaDecreasesToOne) {
  const auto& m = octic();
  const double b = 1.0;
  double previous = -INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto c = make_phi_ab(m.ts.r_star(b) * (1.0 + eps), b, m.ts, m.unit, std::nullopt, 1024);
    const double Na = m.p.dim * m.p.alpha;
    const double direct = -c.beta * c.beta * c.psi.norms.grad_sq * (std::pow(c.beta, (Na - 4.0) / 2.0) - 1.0);
    EXPECT_LT(c.Q, 0.0);
    EXPECT_LT(std::abs(c.Q - direct), 1e-6 * c.norms.grad_sq) << eps;
    EXPECT_GT(c.Q, previous) << eps;
    previous = c.Q;
  }
  EXPECT_GT(previous, -1e-3);
}

TEST(PhiAb, Errors) {
  const auto& m = octic();
  const double b = 1.0;
  expect_kind(ErrorKind::PreconditionViolation, [&] { make_phi_ab(m.ts.r_star(b), b, m.ts, m.unit); });
  expect_kind(ErrorKind::PreconditionViolation, [&] { make_phi_ab(0.5 * m.ts.r_star(b), b, m.ts, m.unit); });
  expect_kind(ErrorKind::InvalidInput, [&] { make_phi_ab(-1.0, b, m.ts, m.unit); });
  expect_kind(ErrorKind::BoundaryLeakage,
              [&] { make_phi_ab(2.0 * m.ts.r_star(b), b, m.ts, m.unit, CartesianGrid(1, 1.0, 256)); });
  const ThresholdSet critical(ModelParams{1, 4.0, 1.0, 1.0}, 1.0);
  expect_kind(ErrorKind::UnsupportedRegime, [&] { make_phi_ab(1.0, 1.0, critical, m.unit); });
}

TEST(Gaussian, PrescribedNorms) {
  for (int dim : {1, 2}) {
    const CartesianGrid g(dim, 20.0, dim == 1 ? 2048 : 512);
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.4, 2.5}, std::pair{2.0, 1.2}}) {
      const auto n = field_norms(gaussian_with_norms(a, b, g), {}, true);
      EXPECT_LT(rel(n.l2(), a), 1e-10) << dim << " " << a << " " << b;
      EXPECT_LT(rel(n.grad_l2(), b), 1e-10) << dim << " " << a << " " << b;
    }
  }
}

TEST(Gaussian, DilationConsistency) {
  const CartesianGrid g(1, 16.0, 512);
  for (double beta : {0.7, 1.6}) {
    const auto direct = gaussian_with_norms(1.3, 2.0, g);
    const auto dilated = dilate_P(beta, gaussian_with_norms(1.3, 2.0 / beta, g));
    double err = 0.0;
    for (std::size_t i = 0; i < g.points; ++i) err = std::max(err, std::abs(direct.values[i] - dilated.values[i]));
    EXPECT_LT(err, 1e-8) << beta;
  }
}

TEST(Gaussian, VarianceDecreasesWithGradient) {
  const CartesianGrid g(2, 12.0, 256);
  double previous = INFINITY;
  for (double b : {0.5, 1.0, 2.0, 3.5, 5.0}) {
    const double v = *field_norms(gaussian_with_norms(1.0, b, g), {}, true).variance;
    EXPECT_LT(v, previous) << b;
    previous = v;
  }
}

TEST(Gaussian, Errors) {
  const CartesianGrid g(1, 10.0, 512);
  expect_kind(ErrorKind::InvalidInput, [&] { gaussian_with_norms(0.0, 1.0, g); });
  expect_kind(ErrorKind::InvalidInput, [&] { gaussian_with_norms(1.0, -1.0, g); });
  expect_kind(ErrorKind::BoundaryLeakage, [&] { gaussian_with_norms(1.0, 0.05, g); });
}

TEST(Embed, ZeroProfileGivesZeroField) {
  const auto zero = sample_radial(10.0, 1001, 2, [](double) { return 0.0; });
  const auto f = embed_radial(zero, CartesianGrid(2, 8.0, 64));
  for (const auto& v : f.values) ASSERT_EQ(v, Complex(0.0, 0.0));
}

TEST(Embed, GroundStateKeepsItsNorms) {
  const auto& m = planar_cubic();
  const auto f = embed_radial(m.unit.profile, CartesianGrid(2, 24.0, 512), m.p);
  const auto n = field_norms(f, {5.0});
  EXPECT_LT(std::abs(constraint_Q(n, m.p)), 1e-6 * n.grad_sq);
  EXPECT_LT(rel(n.mass, m.unit.norms.mass), 1e-6);
  EXPECT_LT(rel(n.grad_sq, m.unit.norms.grad_sq), 1e-6);
  EXPECT_LT(rel(n.lp_at(5.0), m.unit.norms.lp_at(5.0)), 1e-6);
}

TEST(Embed, Errors) {
  const auto wide = sample_radial(40.0, 4001, 1, [](double r) { return std::exp(-r * r / 50.0); });
  expect_kind(ErrorKind::BoundaryLeakage, [&] { embed_radial(wide, CartesianGrid(1, 10.0, 256)); });
  expect_kind(ErrorKind::InvalidInput, [&] { embed_radial(wide, CartesianGrid(2, 40.0, 64)); });
}

TEST(AutoGrid, MassRadiusOfAGaussian) {
  // exp(−r²/2) on the line: tail mass fraction erfc(r) reaches 1e-12 near r ≈ 5.042.
  const auto g = sample_radial(20.0, 20001, 1, [](double r) { return std::exp(-r * r / 2.0); });
  double lo = 0.0, hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erfc(mid) > 1e-12 ? lo : hi) = mid;
  }
  EXPECT_NEAR(mass_radius(g, 1e-12), lo, 2e-3);
  EXPECT_NEAR(auto_grid(g, 256).half_width, 1.5 * mass_radius(g, 1e-12), 1e-15);
  // An exponential tail needs the amplitude rule: e^{−r} drops to 1e-10 at r ≈ 23.03.
  const auto e = sample_radial(40.0, 40001, 1, [](double r) { return std::exp(-r); });
  EXPECT_NEAR(auto_grid(e, 256).half_width, 10.0 * std::log(10.0), 2e-3);
}
