#include "watt/energy.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "watt/error.hpp"

namespace watt {

EnergyReport integrate(std::span<const double> t, std::span<const double> p) {
  if (t.size() != p.size()) throw InvalidArgument("integrate: timestamp and power lengths differ");
  if (t.size() < 2) throw DataError("integrate: need at least 2 power samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(p[i])) throw DataError("integrate: non-finite sample");
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw DataError("integrate: timestamps must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }

  // Sum deviations from the first reading so a constant series integrates to p0 * T exactly.
  const double p0 = p.front();
  const double duration = t.back() - t.front();
  double excess = 0.0;
  std::vector<double> gaps(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    gaps[i] = t[i + 1] - t[i];
    excess += (0.5 * (p[i] + p[i + 1]) - p0) * gaps[i];
  }
  const double energy_j = p0 * duration + excess;

  EnergyReport r;
  r.duration_s = duration;
  r.kwh = energy_j / kJoulesPerKwh;
  r.mean_power_w = energy_j / duration;
  r.kwh_per_day = r.kwh * kSecondsPerDay / duration;

  auto sorted = gaps;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double median = *mid;
  const auto long_gaps = std::count_if(gaps.begin(), gaps.end(), [&](double g) { return g > 10.0 * median; });
  if (long_gaps > 0) {
    r.warnings.push_back(fmt::format("{} sampling gap(s) longer than 10x the median interval ({} s); "
                                     "integrated as-is",
                                     long_gaps, median));
  }
  return r;
}

EnergyReport integrate(std::span<const PowerSample> power) {
  std::vector<double> t(power.size());
  std::vector<double> p(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) {
    t[i] = power[i].timestamp;
    p[i] = power[i].power_w;
  }
  return integrate(t, p);
}

EnergyReport integrate_predicted(const PowerModel& model, std::span<const MetricSample> metrics) {
  std::vector<double> t(metrics.size());
  std::vector<double> p(metrics.size());
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    t[i] = metrics[i].timestamp;
    p[i] = predict(model, metrics[i]);
  }
  return integrate(t, p);
}

std::string to_json(const EnergyReport& r) {
  const nlohmann::json doc = {
      {"kwh", r.kwh}, {"duration_s", r.duration_s}, {"mean_power_w", r.mean_power_w}, {"kwh_per_day", r.kwh_per_day}};
  return doc.dump(2);
}

}  // namespace watt
