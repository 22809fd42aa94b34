#pragma once

#include <cstddef>
#include <string_view>

#include "hqc/dynamics.hpp"

namespace hqc {

/// Least-squares fit of log m2 = log C + beta log T.
struct TransportFit {
  double beta = 0.0;
  double log_c = 0.0;
  /// RMS of the log-log residuals.
  double residual = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t n_points = 0;
  /// Samples inside the window dropped because m2 <= 0.
  std::size_t excluded = 0;
};

inline constexpr std::size_t kMinFitPoints = 8;

TransportFit fit_beta(const MomentSeries& series, double t_min, double t_max);

/// Fit over the last decade [T_max / 10, T_max] of the series.
TransportFit fit_last_decade(const MomentSeries& series);

enum class Regime { localized, anomalous, near_ballistic };

std::string_view to_string(Regime r);

struct ClassifyThresholds {
  /// Localized needs beta below this ...
  double localized_beta = 0.2;
  /// ... and the plateau ratio below this.
  double plateau_ratio = 1.25;
  double ballistic_beta = 1.9;
};

struct RegimeLabel {
  Regime regime = Regime::anomalous;
  /// max m2 over the later half of the fit window (in log t) divided by
  /// max m2 over the earlier half.
  double plateau_ratio = 0.0;
  ClassifyThresholds thresholds;
};

/// localized if beta < localized_beta and the plateau ratio is below
/// plateau_ratio (the defaults agree: a T^0.2 law grows by 10^0.1 ~ 1.26
/// over half a decade); near_ballistic if beta > ballistic_beta; anomalous
/// otherwise.
RegimeLabel classify(const MomentSeries& series, const TransportFit& fit, const ClassifyThresholds& thresholds = {});

}  // namespace hqc
