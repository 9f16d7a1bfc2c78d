#pragma once

#include <span>
#include <string>
#include <vector>

#include "watt/powermodel.hpp"
#include "watt/trace.hpp"

namespace watt {

inline constexpr double kJoulesPerKwh = 3.6e6;
inline constexpr double kSecondsPerDay = 86400.0;

struct EnergyReport {
  double kwh = 0.0;
  double duration_s = 0.0;
  double mean_power_w = 0.0;
  double kwh_per_day = 0.0;
  /// Non-fatal notes, e.g. sampling gaps longer than 10x the median interval.
  std::vector<std::string> warnings;
};

/// Trapezoidal energy of a power series. Needs >= 2 samples with strictly increasing
/// timestamps. Any finite wattage is accepted, so unclamped predictions can be fed in.
EnergyReport integrate(std::span<const double> timestamps, std::span<const double> power_w);
EnergyReport integrate(std::span<const PowerSample> power);

/// Energy of the model's predictions over a metric trace.
EnergyReport integrate_predicted(const PowerModel& model, std::span<const MetricSample> metrics);

std::string to_json(const EnergyReport& report);

}  // namespace watt
