#include "watt/tariff.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "watt/error.hpp"

namespace watt {
namespace {

std::string money(double v, const std::string& currency) {
  // Thousands separators, two decimals.
  const std::string digits = fmt::format("{:.2f}", std::abs(v));
  const auto dot = digits.find('.');
  std::string whole = digits.substr(0, dot);
  for (auto i = static_cast<std::ptrdiff_t>(whole.size()) - 3; i > 0; i -= 3) {
    whole.insert(static_cast<std::size_t>(i), ",");
  }
  return (v < 0 ? "-" : "") + currency + whole + digits.substr(dot);
}

}  // namespace

CostProjection project_cost(double kwh_per_day, const Tariff& tariff, int horizon_months) {
  if (!(kwh_per_day > 0.0) || !std::isfinite(kwh_per_day)) {
    throw InvalidArgument("kwh_per_day must be a positive number");
  }
  if (!(tariff.rate_per_kwh > 0.0) || !std::isfinite(tariff.rate_per_kwh)) {
    throw InvalidArgument("tariff rate must be a positive number");
  }
  if (!(tariff.escalation_per_year >= 0.0) || !std::isfinite(tariff.escalation_per_year)) {
    throw InvalidArgument("tariff escalation must be >= 0");
  }
  if (horizon_months < 1) throw InvalidArgument("horizon must be at least one month");

  CostProjection out;
  out.horizon_months = horizon_months;
  const double total_days = horizon_months % 12 == 0 ? kDaysPerYear * (horizon_months / 12)
                                                     : horizon_months * kDaysPerYear / 12.0;
  double remaining = total_days;
  for (int k = 0; remaining > 0.0; ++k) {
    YearlyCost y;
    y.year_index = k;
    y.days = std::min(kDaysPerYear, remaining);
    y.kwh = kwh_per_day * y.days;
    y.rate_used = tariff.rate_per_kwh * std::pow(1.0 + tariff.escalation_per_year, k);
    y.cost = y.kwh * y.rate_used;
    out.total_cost += y.cost;
    out.yearly.push_back(y);
    remaining -= y.days;
  }
  return out;
}

BreakdownReport breakdown(double energy_cost, std::span<const CostLine> other, std::string energy_label) {
  if (!(energy_cost >= 0.0) || !std::isfinite(energy_cost)) {
    throw InvalidArgument("energy cost must be a finite value >= 0");
  }
  BreakdownReport r;
  for (const auto& line : other) {
    if (!(line.cost >= 0.0) || !std::isfinite(line.cost)) {
      throw InvalidArgument("cost of '" + line.label + "' must be a finite value >= 0");
    }
    r.categories.push_back({line.label, line.cost, 0.0});
  }
  r.categories.push_back({std::move(energy_label), energy_cost, 0.0});

  for (const auto& c : r.categories) r.total += c.cost;
  if (!(r.total > 0.0)) throw InvalidArgument("breakdown total is zero; shares are undefined");
  for (auto& c : r.categories) c.percent_of_total = 100.0 * c.cost / r.total;

  std::stable_sort(r.categories.begin(), r.categories.end(),
                   [](const BreakdownLine& a, const BreakdownLine& b) { return a.cost > b.cost; });
  return r;
}

std::string render_text(const CostProjection& p, const std::string& currency) {
  std::string out = fmt::format("{:<6} {:>8} {:>14} {:>12} {:>14}\n", "Year", "Days", "kWh", "Rate", "Cost");
  for (const auto& y : p.yearly) {
    out += fmt::format("{:<6} {:>8.6g} {:>14.6g} {:>12.6g} {:>14}\n", y.year_index + 1, y.days, y.kwh,
                       y.rate_used, money(y.cost, currency));
  }
  out += fmt::format("{:<6} {:>8} {:>14} {:>12} {:>14}\n", "Total", "", "", "", money(p.total_cost, currency));
  return out;
}

std::string render_text(const BreakdownReport& r, const std::string& currency) {
  std::size_t width = 8;
  for (const auto& c : r.categories) width = std::max(width, c.label.size());
  std::string out = fmt::format("{:<{}}  {:>14}  {:>8}\n", "Category", width, "Cost", "Share");
  for (const auto& c : r.categories) {
    out += fmt::format("{:<{}}  {:>14}  {:>7.1f}%\n", c.label, width, money(c.cost, currency),
                       c.percent_of_total);
  }
  out += fmt::format("{:<{}}  {:>14}  {:>7.1f}%\n", "Total", width, money(r.total, currency), 100.0);
  return out;
}

std::string to_json(const CostProjection& p) {
  nlohmann::json yearly = nlohmann::json::array();
  for (const auto& y : p.yearly) {
    yearly.push_back(
        {{"year_index", y.year_index}, {"days", y.days}, {"kwh", y.kwh}, {"rate_used", y.rate_used}, {"cost", y.cost}});
  }
  const nlohmann::json doc = {{"yearly", yearly}, {"total_cost", p.total_cost}, {"horizon_months", p.horizon_months}};
  return doc.dump(2);
}

std::string to_json(const BreakdownReport& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : r.categories) {
    arr.push_back({{"label", c.label}, {"cost", c.cost}, {"percent", c.percent_of_total}});
  }
  return arr.dump(2);
}

}  // namespace watt
