#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nlsthresh/sweep.hpp"
#include "nlsthresh/thresholds.hpp"

namespace nls {

/// Static SVG of γ*, r*, ρ* over the (b, a) plane on log axes, with sweep
/// outcomes (if any) as colored markers.
inline std::string threshold_plot_svg(const ThresholdSet& ts, double b_min, double b_max,
                                      const std::vector<SweepPoint>& points = {}) {
  require(b_min > 0.0 && b_max > b_min, ErrorKind::InvalidInput, "bad plot range");
  const double W = 640, H = 480, m = 60;
  const int samples = 200;
  struct Curve {
    const char* name;
    const char* color;
    std::vector<double> a;
  };
  std::vector<Curve> curves{{"gamma*", "#1f77b4", {}}, {"r*", "#d62728", {}}, {"rho*", "#2ca02c", {}}};
  std::vector<double> bs(samples);
  double a_lo = 1e300, a_hi = 0.0;
  for (int k = 0; k < samples; ++k) {
    bs[k] = std::exp(std::log(b_min) + (std::log(b_max) - std::log(b_min)) * k / (samples - 1));
    const auto t = evaluate_thresholds(ts, bs[k]);
    curves[0].a.push_back(t.gamma);
    curves[1].a.push_back(t.r);
    curves[2].a.push_back(t.rho);
    a_lo = std::min({a_lo, t.gamma, t.r, t.rho});
    a_hi = std::max({a_hi, t.gamma, t.r, t.rho});
  }
  for (const auto& p : points) {
    a_lo = std::min(a_lo, p.a);
    a_hi = std::max(a_hi, p.a);
  }
  a_lo /= 1.2;
  a_hi *= 1.2;
  auto px = [&](double b) { return m + (W - 2 * m) * (std::log(b / b_min) / std::log(b_max / b_min)); };
  auto py = [&](double a) { return H - m - (H - 2 * m) * (std::log(a / a_lo) / std::log(a_hi / a_lo)); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
    << W << ' ' << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m << "\" height=\"" << H - 2 * m
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"14\">"
    << "b = gradient norm (log)</text>\n";
  s << "<text x=\"18\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
    << H / 2 << ")\">a = mass norm (log)</text>\n";
  s << "<text x=\"" << m << "\" y=\"" << H - m + 16 << "\" font-size=\"11\">" << fmt_num(b_min) << "</text>\n";
  s << "<text x=\"" << W - m << "\" y=\"" << H - m + 16 << "\" font-size=\"11\" text-anchor=\"end\">"
    << fmt_num(b_max) << "</text>\n";
  s << "<text x=\"" << m - 4 << "\" y=\"" << H - m << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_num(a_lo)
    << "</text>\n";
  s << "<text x=\"" << m - 4 << "\" y=\"" << m + 10 << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_num(a_hi)
    << "</text>\n";
  int row = 0;
  for (const auto& c : curves) {
    s << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"2\" points=\"";
    for (int k = 0; k < samples; ++k) s << px(bs[k]) << ',' << py(c.a[k]) << ' ';
    s << "\"/>\n";
    s << "<text x=\"" << W - m - 70 << "\" y=\"" << m + 18 + 16 * row++ << "\" font-size=\"12\" fill=\""
      << c.color << "\">" << c.name << "</text>\n";
  }
  for (const auto& p : points) {
    const char* color = "#7f7f7f";
    if (p.status == RunStatus::GlobalOnWindow) color = "#1f77b4";
    if (p.status == RunStatus::BlowUpDetected) color = "#d62728";
    if (p.status == RunStatus::DiagnosticsViolated) color = "#ff7f0e";
    s << "<circle cx=\"" << px(p.b) << "\" cy=\"" << py(p.a) << "\" r=\"5\" fill=\"" << color
      << "\"><title>a=" << fmt_num(p.a) << " b=" << fmt_num(p.b) << ' ' << to_string(p.status)
      << "</title></circle>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace nls
