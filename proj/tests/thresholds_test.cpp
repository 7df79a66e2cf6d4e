#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/thresholds.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace nls;
using testutil::expect_kind;
using testutil::rel;

namespace {

// The displayed threshold formulas, evaluated literally with pow.
struct Literal {
  double N, alpha, lambda, R;
  double D() const { return 4.0 - alpha * (N - 2.0); }
  double gap() const { return N * alpha - 4.0; }
  double Lam() const { return std::pow(lambda, -1.0 / alpha) * R; }
  double r(double a) const {
    return std::pow(N * alpha / D(), gap() / (2.0 * D())) * std::pow(Lam(), 2.0 * alpha / D()) *
           std::pow(a, -gap() / D());
  }
  double gamma(double a) const { return std::pow(gap() / (N * alpha), gap() / (2.0 * D())) * r(a); }
  double rho(double a) const { return std::pow(N * alpha / 4.0, 2.0 / D()) * r(a); }
  double r_inv(double a) const {
    return std::sqrt(N * alpha / D()) * std::pow(Lam(), 2.0 * alpha / gap()) * std::pow(a, -D() / gap());
  }
  double gamma_inv(double a) const { return std::sqrt(gap() / (N * alpha)) * r_inv(a); }
  double rho_inv(double a) const { return std::pow(N * alpha / 4.0, 2.0 / gap()) * r_inv(a); }
};

struct Case {
  ModelParams p;
  double R;
};

std::vector<Case> cases() {
  return {{{1, 8.0, 1.0, 1.0}, 1.3}, {{1, 5.0, 2.5, 1.0}, 0.9}, {{2, 3.0, 0.7, 1.0}, 2.1}, {{3, 2.0, 1.0, 1.0}, 3.4}};
}

using Map = std::function<double(const ThresholdSet&, double)>;

std::vector<std::pair<const char*, Map>> forward_maps() {
  return {{"gamma", [](const ThresholdSet& t, double a) { return t.gamma_star(a); }},
          {"r", [](const ThresholdSet& t, double a) { return t.r_star(a); }},
          {"rho", [](const ThresholdSet& t, double a) { return t.rho_star(a); }}};
}

std::vector<std::pair<const char*, Map>> inverse_maps() {
  return {{"gamma_inv", [](const ThresholdSet& t, double a) { return t.gamma_star_inv(a); }},
          {"r_inv", [](const ThresholdSet& t, double a) { return t.r_star_inv(a); }},
          {"rho_inv", [](const ThresholdSet& t, double a) { return t.rho_star_inv(a); }}};
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(hi / lo, i / (count - 1.0)));
  return out;
}

}  // namespace

TEST(Thresholds, MatchLiteralFormulas) {
  for (const auto& c : cases()) {
    const ThresholdSet ts(c.p, c.R);
    const Literal lit{static_cast<double>(c.p.dim), c.p.alpha, c.p.lambda, c.R};
    for (double a : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const auto t = evaluate_thresholds(ts, a);
      EXPECT_LT(rel(t.gamma, lit.gamma(a)), 1e-12);
      EXPECT_LT(rel(t.r, lit.r(a)), 1e-12);
      EXPECT_LT(rel(t.rho, lit.rho(a)), 1e-12);
      const auto inv = invert_thresholds(ts, a);
      EXPECT_LT(rel(inv.gamma, lit.gamma_inv(a)), 1e-12);
      EXPECT_LT(rel(inv.r, lit.r_inv(a)), 1e-12);
      EXPECT_LT(rel(inv.rho, lit.rho_inv(a)), 1e-12);
    }
    EXPECT_EQ(ts.C_star, gn_constant_formula(c.p, c.R));
  }
}

TEST(Thresholds, InversePairs) {
  for (const auto& c : cases()) {
    const ThresholdSet ts(c.p, c.R);
    for (double a : {0.1, 1.0, 10.0}) {
      EXPECT_LT(rel(ts.r_star(ts.r_star_inv(a)), a), 1e-12);
      EXPECT_LT(rel(ts.gamma_star(ts.gamma_star_inv(a)), a), 1e-12);
      EXPECT_LT(rel(ts.rho_star(ts.rho_star_inv(a)), a), 1e-12);
      EXPECT_LT(rel(ts.r_star_inv(ts.r_star(a)), a), 1e-12);
      EXPECT_LT(rel(ts.gamma_star_inv(ts.gamma_star(a)), a), 1e-12);
      EXPECT_LT(rel(ts.rho_star_inv(ts.rho_star(a)), a), 1e-12);
    }
  }
}

TEST(Thresholds, OneDimensionalOctic) {
  const ThresholdSet ts(ModelParams{1, 8.0, 1.0, 1.0}, std::sqrt(oracle::soliton_mass(8.0)));
  for (double a : {0.05, 1.0, 30.0}) {
    EXPECT_NEAR(ts.gamma_star(a) / ts.r_star(a), std::pow(0.5, 1.0 / 6.0), 1e-13);
    EXPECT_NEAR(ts.rho_star(a) / ts.r_star(a), std::pow(2.0, 1.0 / 6.0), 1e-13);
  }
  EXPECT_NEAR(std::pow(0.5, 1.0 / 6.0), 0.890899, 1e-6);
  EXPECT_NEAR(std::pow(2.0, 1.0 / 6.0), 1.122462, 1e-6);
}

TEST(Thresholds, Ordering) {
  for (const auto& c : cases()) {
    const ThresholdSet ts(c.p, c.R);
    for (double a : log_spaced(1e-3, 1e3, 100)) {
      const auto t = evaluate_thresholds(ts, a);
      EXPECT_LT(t.gamma, t.r) << a;
      EXPECT_LT(t.r, t.rho) << a;
      const auto inv = invert_thresholds(ts, a);
      EXPECT_LT(inv.gamma, inv.r) << a;
      EXPECT_LT(inv.r, inv.rho) << a;
    }
  }
}

TEST(Thresholds, DecreasingPowerLaws) {
  for (const auto& c : cases()) {
    const ThresholdSet ts(c.p, c.R);
    const double N = c.p.dim, al = c.p.alpha;
    const double e = -(N * al - 4.0) / (4.0 - al * (N - 2.0));
    EXPECT_DOUBLE_EQ(ts.power_law_exponent(), e);
    EXPECT_DOUBLE_EQ(ts.inverse_power_law_exponent(), 1.0 / e);
    const auto grid = log_spaced(1e-2, 1e2, 60);
    for (const auto& [name, f] : forward_maps()) {
      for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(f(ts, grid[i]), f(ts, grid[i - 1])) << name;
      for (double cc : {0.5, 3.0, 17.0}) EXPECT_LT(rel(f(ts, cc * 0.7), std::pow(cc, e) * f(ts, 0.7)), 1e-12) << name;
    }
    for (const auto& [name, f] : inverse_maps()) {
      for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(f(ts, grid[i]), f(ts, grid[i - 1])) << name;
      for (double cc : {0.5, 3.0, 17.0}) {
        EXPECT_LT(rel(f(ts, cc * 0.7), std::pow(cc, 1.0 / e) * f(ts, 0.7)), 1e-12) << name;
      }
    }
  }
}

TEST(Thresholds, ExtremeArguments) {
  // Large exponents: N = 3 near the energy-critical power.
  const ThresholdSet ts(ModelParams{3, 3.8, 1.0, 1.0}, 20.0);
  const double e = ts.power_law_exponent();
  EXPECT_LT(e, -30.0);
  for (double a : {1e-4, 1e4}) {
    const double v = ts.r_star(a);
    EXPECT_TRUE(std::isfinite(v) && v > 0.0) << a;
    EXPECT_LT(std::abs(std::log(v) - (std::log(ts.r_star(1.0)) + e * std::log(a))), 1e-10 * std::abs(std::log(v)));
  }
}

TEST(Thresholds, Errors) {
  const ThresholdSet ts(ModelParams{1, 8.0, 1.0, 1.0}, 1.0);
  expect_kind(ErrorKind::InvalidInput, [&] { ts.r_star(0.0); });
  expect_kind(ErrorKind::InvalidInput, [&] { ts.gamma_star_inv(-1.0); });
  expect_kind(ErrorKind::InvalidInput, [&] { ts.rho_star(std::nan("")); });
  const ThresholdSet critical(ModelParams{1, 4.0, 1.0, 1.0}, 1.0);
  expect_kind(ErrorKind::UnsupportedRegime, [&] { critical.r_star(1.0); });
  const ThresholdSet sub(ModelParams{2, 1.0, 1.0, 1.0}, 1.0);
  expect_kind(ErrorKind::UnsupportedRegime, [&] { sub.gamma_star(1.0); });
  expect_kind(ErrorKind::InvalidInput, [] { ThresholdSet(ModelParams{1, 8.0, -1.0, 1.0}, 1.0); });
  const auto unit = unit_ground_state(1, 6.0);
  expect_kind(ErrorKind::InvalidInput, [&] { ThresholdSet::from_unit(ModelParams{1, 8.0, 1.0, 1.0}, unit); });
}

TEST(Thresholds, CriticalLimit) {
  std::vector<double> dg, dr;
  for (double alpha : {4.2, 4.1, 4.05}) {
    const ModelParams p{1, alpha, 1.0, 1.0};
    const auto ts = ThresholdSet::from_unit(p, unit_ground_state(1, alpha));
    dg.push_back(std::abs(ts.gamma_star(1.0) - ts.Lambda()));
    dr.push_back(std::abs(ts.r_star(1.0) - ts.Lambda()));
  }
  for (std::size_t i = 1; i < dg.size(); ++i) {
    EXPECT_LT(dg[i], dg[i - 1]);
    EXPECT_LT(dr[i], dr[i - 1]);
  }
}

TEST(Classify, Boundaries) {
  const ThresholdSet ts(ModelParams{1, 8.0, 1.0, 1.0}, std::sqrt(oracle::soliton_mass(8.0)));
  for (double b : {0.3, 1.0, 4.0}) {
    const auto t = evaluate_thresholds(ts, b);
    EXPECT_EQ(classify_plane_point(ts, t.gamma, b).region, Region::GuaranteedGlobal);
    EXPECT_FALSE(classify_plane_point(ts, t.gamma, b).energy_sign.has_value());
    EXPECT_EQ(classify_plane_point(ts, t.gamma * (1 + 1e-9), b).region, Region::Gap);
    EXPECT_EQ(classify_plane_point(ts, 0.5 * (t.gamma + t.r), b).region, Region::Gap);
    EXPECT_EQ(classify_plane_point(ts, t.r, b).region, Region::Gap);
    const auto above_r = classify_plane_point(ts, 0.5 * (t.r + t.rho), b);
    EXPECT_EQ(above_r.region, Region::BlowUpConstructible);
    EXPECT_EQ(above_r.energy_sign, EnergySign::Positive);
    const auto at_rho = classify_plane_point(ts, t.rho, b);
    EXPECT_EQ(at_rho.region, Region::BlowUpConstructible);
    EXPECT_EQ(at_rho.energy_sign, EnergySign::Zero);
    EXPECT_EQ(classify_plane_point(ts, 1.5 * t.rho, b).energy_sign, EnergySign::Negative);
    EXPECT_EQ(classify_plane_point(ts, 0.1 * t.gamma, b).region, Region::GuaranteedGlobal);
  }
  expect_kind(ErrorKind::InvalidInput, [&] { classify_plane_point(ts, 0.0, 1.0); });
  expect_kind(ErrorKind::InvalidInput, [&] { classify_plane_point(ts, 1.0, -1.0); });
}

TEST(Classify, PartitionOfThePlane) {
  const ThresholdSet ts(ModelParams{2, 3.0, 1.0, 1.0}, 2.1);
  int counts[3] = {0, 0, 0};
  for (double a : log_spaced(0.1, 10.0, 40)) {
    for (double b : log_spaced(0.1, 10.0, 40)) {
      const auto label = classify_plane_point(ts, a, b);
      const auto t = evaluate_thresholds(ts, b);
      const bool global = a <= t.gamma, blow = a > t.r;
      ASSERT_FALSE(global && blow);
      const Region expected = global ? Region::GuaranteedGlobal : blow ? Region::BlowUpConstructible : Region::Gap;
      ASSERT_EQ(label.region, expected) << a << " " << b;
      ASSERT_EQ(label.energy_sign.has_value(), blow);
      ++counts[static_cast<int>(label.region)];
    }
  }
  for (int c : counts) EXPECT_GT(c, 0);
}
