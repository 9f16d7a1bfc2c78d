#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace watt {

/// One timestamped observation of host resource usage.
///
/// `cpu` is a fraction of total machine CPU in [0,1]. The other three regressors are
/// non-negative magnitudes in whatever unit the collecting agent reports; the fitted
/// coefficients absorb the units.
struct MetricSample {
  double timestamp = 0.0;
  double cpu = 0.0;
  double mem = 0.0;
  double disk = 0.0;
  double net = 0.0;

  friend bool operator==(const MetricSample&, const MetricSample&) = default;
};

/// One wall-power reading in watts.
struct PowerSample {
  double timestamp = 0.0;
  double power_w = 0.0;

  friend bool operator==(const PowerSample&, const PowerSample&) = default;
};

/// A metric sample joined with the power reading nearest to it.
struct AlignedRow {
  double timestamp = 0.0;
  double cpu = 0.0;
  double mem = 0.0;
  double disk = 0.0;
  double net = 0.0;
  double power_w = 0.0;
  double power_timestamp = 0.0;

  friend bool operator==(const AlignedRow&, const AlignedRow&) = default;
};

struct AlignedTrace {
  std::vector<AlignedRow> rows;
  std::size_t metric_count = 0;
  std::size_t power_count = 0;
  std::size_t dropped = 0;

  friend bool operator==(const AlignedTrace&, const AlignedTrace&) = default;
};

inline constexpr std::string_view kMetricsHeader = "timestamp,cpu,mem,disk,net";
inline constexpr std::string_view kPowerHeader = "timestamp,power_w";

/// Throws InvalidArgument when `sample` violates the MetricSample invariants.
void validate(const MetricSample& sample);
void validate(const PowerSample& sample);

std::vector<MetricSample> parse_metrics(std::string_view text);
std::vector<MetricSample> parse_metrics(std::istream& in);
std::vector<PowerSample> parse_power(std::string_view text);
std::vector<PowerSample> parse_power(std::istream& in);

/// CSV writers. Numbers use the shortest representation that reads back bit-identical.
void write_metrics(std::ostream& out, std::span<const MetricSample> samples);
void write_power(std::ostream& out, std::span<const PowerSample> samples);

/// Half the median spacing between consecutive metric timestamps.
double default_tolerance(std::span<const MetricSample> metrics);

/// Pairs every metric sample with the nearest power sample no further than `tolerance_s`
/// away. Equidistant candidates resolve to the earlier power sample. Metric samples
/// without a partner are dropped and counted.
AlignedTrace align(std::span<const MetricSample> metrics, std::span<const PowerSample> power,
                   double tolerance_s);

/// Regressor vector (1, cpu, mem, disk, net) for a sample.
inline Eigen::Matrix<double, 5, 1> regressors(const MetricSample& s) {
  return (Eigen::Matrix<double, 5, 1>() << 1.0, s.cpu, s.mem, s.disk, s.net).finished();
}

inline Eigen::Matrix<double, 5, 1> regressors(const AlignedRow& r) {
  return (Eigen::Matrix<double, 5, 1>() << 1.0, r.cpu, r.mem, r.disk, r.net).finished();
}

/// Shortest round-trip decimal text for `value`.
std::string format_number(double value);

}  // namespace watt
