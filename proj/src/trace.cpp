#include "watt/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "watt/error.hpp"

namespace watt {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits on '\n', hands each line (without terminator) and its 1-based number to `fn`.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

double parse_field(std::string_view field, std::string_view name, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError(line, "field '" + std::string(name) + "' is not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "field '" + std::string(name) + "' is not finite");
  }
  return value;
}

template <std::size_t N>
std::array<double, N> parse_row(std::string_view line, const std::array<std::string_view, N>& names,
                                std::size_t line_no) {
  std::array<double, N> values{};
  std::size_t i = 0;
  while (true) {
    const auto comma = line.find(',');
    if (i == N) {
      throw ParseError(line_no, "expected " + std::to_string(N) + " fields, got more");
    }
    values[i] = parse_field(line.substr(0, comma), names[i], line_no);
    ++i;
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (i != N) {
    throw ParseError(line_no, "expected " + std::to_string(N) + " fields, got " + std::to_string(i));
  }
  return values;
}

template <std::size_t N, typename Build>
auto parse_csv(std::string_view text, std::string_view header, const std::array<std::string_view, N>& names,
               Build&& build) {
  using Sample = decltype(build(std::array<double, N>{}, std::size_t{}));
  std::vector<Sample> out;
  bool seen_header = false;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (!seen_header) {
      if (trim(line) != header) {
        throw ParseError(line_no, "expected header '" + std::string(header) + "', got '" +
                                      std::string(trim(line)) + "'");
      }
      seen_header = true;
      return;
    }
    if (trim(line).empty()) return;
    Sample sample = build(parse_row(line, names, line_no), line_no);
    if (!out.empty()) {
      if (sample.timestamp == out.back().timestamp) {
        throw ParseError(line_no, "duplicate timestamp " + format_number(sample.timestamp));
      }
      if (sample.timestamp < out.back().timestamp) {
        throw ParseError(line_no, "timestamp " + format_number(sample.timestamp) +
                                      " decreases (previous " + format_number(out.back().timestamp) + ")");
      }
    }
    out.push_back(sample);
  });
  if (!seen_header) throw ParseError(1, "missing header '" + std::string(header) + "'");
  return out;
}

std::string slurp(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

constexpr std::array<std::string_view, 5> kMetricFields{"timestamp", "cpu", "mem", "disk", "net"};
constexpr std::array<std::string_view, 2> kPowerFields{"timestamp", "power_w"};

}  // namespace

void validate(const MetricSample& s) {
  if (!std::isfinite(s.timestamp) || !std::isfinite(s.cpu) || !std::isfinite(s.mem) ||
      !std::isfinite(s.disk) || !std::isfinite(s.net)) {
    throw InvalidArgument("metric sample has a non-finite field");
  }
  if (s.cpu < 0.0 || s.cpu > 1.0) {
    throw InvalidArgument("cpu " + format_number(s.cpu) + " outside [0,1]");
  }
  if (s.mem < 0.0) throw InvalidArgument("mem must be >= 0");
  if (s.disk < 0.0) throw InvalidArgument("disk must be >= 0");
  if (s.net < 0.0) throw InvalidArgument("net must be >= 0");
}

void validate(const PowerSample& s) {
  if (!std::isfinite(s.timestamp) || !std::isfinite(s.power_w)) {
    throw InvalidArgument("power sample has a non-finite field");
  }
  if (s.power_w <= 0.0) {
    throw InvalidArgument("non-positive power " + format_number(s.power_w) + " W");
  }
}

std::vector<MetricSample> parse_metrics(std::string_view text) {
  return parse_csv(text, kMetricsHeader, kMetricFields, [](const std::array<double, 5>& v, std::size_t line) {
    MetricSample s{v[0], v[1], v[2], v[3], v[4]};
    try {
      validate(s);
    } catch (const InvalidArgument& e) {
      throw ParseError(line, e.what());
    }
    return s;
  });
}

std::vector<MetricSample> parse_metrics(std::istream& in) { return parse_metrics(slurp(in)); }

std::vector<PowerSample> parse_power(std::string_view text) {
  return parse_csv(text, kPowerHeader, kPowerFields, [](const std::array<double, 2>& v, std::size_t line) {
    PowerSample s{v[0], v[1]};
    try {
      validate(s);
    } catch (const InvalidArgument& e) {
      throw ParseError(line, e.what());
    }
    return s;
  });
}

std::vector<PowerSample> parse_power(std::istream& in) { return parse_power(slurp(in)); }

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_metrics(std::ostream& out, std::span<const MetricSample> samples) {
  out << kMetricsHeader << '\n';
  for (const auto& s : samples) {
    out << format_number(s.timestamp) << ',' << format_number(s.cpu) << ',' << format_number(s.mem) << ','
        << format_number(s.disk) << ',' << format_number(s.net) << '\n';
  }
}

void write_power(std::ostream& out, std::span<const PowerSample> samples) {
  out << kPowerHeader << '\n';
  for (const auto& s : samples) {
    out << format_number(s.timestamp) << ',' << format_number(s.power_w) << '\n';
  }
}

double default_tolerance(std::span<const MetricSample> metrics) {
  if (metrics.size() < 2) {
    throw DataError("need at least 2 metric samples to derive a default tolerance");
  }
  std::vector<double> gaps;
  gaps.reserve(metrics.size() - 1);
  for (std::size_t i = 1; i < metrics.size(); ++i) {
    gaps.push_back(metrics[i].timestamp - metrics[i - 1].timestamp);
  }
  const auto mid = gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  double median = *mid;
  if (gaps.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(gaps.begin(), mid));
  }
  if (!(median > 0.0)) throw DataError("metric timestamps do not advance");
  return 0.5 * median;
}

AlignedTrace align(std::span<const MetricSample> metrics, std::span<const PowerSample> power,
                   double tolerance_s) {
  if (!(tolerance_s > 0.0) || !std::isfinite(tolerance_s)) {
    throw InvalidArgument("alignment tolerance must be a positive number of seconds");
  }
  const auto by_time = [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; };
  if (!std::is_sorted(metrics.begin(), metrics.end(), by_time) ||
      !std::is_sorted(power.begin(), power.end(), by_time)) {
    throw InvalidArgument("align requires time-ordered inputs");
  }

  AlignedTrace trace;
  trace.metric_count = metrics.size();
  trace.power_count = power.size();
  trace.rows.reserve(metrics.size());

  auto next = power.begin();
  for (const auto& m : metrics) {
    // First power sample at or after the metric timestamp; the candidate set is it and its predecessor.
    while (next != power.end() && next->timestamp < m.timestamp) ++next;
    const PowerSample* best = nullptr;
    double best_dist = 0.0;
    if (next != power.begin()) {
      best = &*std::prev(next);
      best_dist = m.timestamp - best->timestamp;
    }
    if (next != power.end()) {
      const double d = next->timestamp - m.timestamp;
      if (best == nullptr || d < best_dist) {
        best = &*next;
        best_dist = d;
      }
    }
    if (best == nullptr || best_dist > tolerance_s) {
      ++trace.dropped;
      continue;
    }
    trace.rows.push_back({m.timestamp, m.cpu, m.mem, m.disk, m.net, best->power_w, best->timestamp});
  }

  if (trace.rows.empty()) throw EmptyAlignmentError(trace.metric_count, trace.dropped);
  return trace;
}

}  // namespace watt
