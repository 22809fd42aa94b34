#include "hqc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "hqc/error.hpp"

namespace hqc {

TransportFit fit_beta(const MomentSeries& series, double t_min, double t_max) {
  if (!(t_min < t_max)) fail(ErrorKind::precondition, "fit window needs t_min < t_max");
  TransportFit fit;
  fit.t_min = t_min;
  fit.t_max = t_max;
  double sx = 0, sy = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : series.samples) {
    if (s.t < t_min || s.t > t_max) continue;
    if (!(s.m2 > 0.0) || !(s.t > 0.0)) {
      ++fit.excluded;
      continue;
    }
    pts.emplace_back(std::log(s.t), std::log(s.m2));
    sx += pts.back().first;
    sy += pts.back().second;
  }
  fit.n_points = pts.size();
  if (pts.size() < kMinFitPoints)
    fail(ErrorKind::insufficient_data, "fit window holds " + std::to_string(pts.size()) + " usable samples, need " +
                                           std::to_string(kMinFitPoints));
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::insufficient_data, "fit window has no spread in log T");
  fit.beta = sxy / sxx;
  fit.log_c = my - fit.beta * mx;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.log_c + fit.beta * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

TransportFit fit_last_decade(const MomentSeries& series) {
  if (series.samples.empty()) fail(ErrorKind::insufficient_data, "empty moment series");
  const double t_end = series.samples.back().t;
  // Widen by a hair so the sample sitting exactly at T_max / 10 is kept.
  return fit_beta(series, t_end / 10.0 * (1.0 - 1e-12), t_end);
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::localized: return "localized";
    case Regime::anomalous: return "anomalous";
    case Regime::near_ballistic: return "near_ballistic";
  }
  return "anomalous";
}

RegimeLabel classify(const MomentSeries& series, const TransportFit& fit, const ClassifyThresholds& thresholds) {
  RegimeLabel label;
  label.thresholds = thresholds;
  // Split the fit window at its geometric midpoint and compare the spread
  // reached in the later half with the earlier half.
  const double mid = std::sqrt(fit.t_min * fit.t_max);
  double early = 0.0, late = 0.0;
  for (const auto& s : series.samples) {
    if (s.t < fit.t_min || s.t > fit.t_max) continue;
    if (s.t < mid) early = std::max(early, s.m2);
    else late = std::max(late, s.m2);
  }
  if (early > 0.0) label.plateau_ratio = late / early;
  else label.plateau_ratio = late > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;

  if (fit.beta < thresholds.localized_beta && label.plateau_ratio < thresholds.plateau_ratio)
    label.regime = Regime::localized;
  else if (fit.beta > thresholds.ballistic_beta)
    label.regime = Regime::near_ballistic;
  else
    label.regime = Regime::anomalous;
  return label;
}

}  // namespace hqc
