#pragma once

#include <span>
#include <string>
#include <vector>

namespace watt {

inline constexpr double kDaysPerYear = 365.0;

struct Tariff {
  double rate_per_kwh = 0.0;
  double escalation_per_year = 0.0;  // fraction, 0.15 == 15% a year
  std::string currency_label = "$";
};

struct YearlyCost {
  int year_index = 0;
  double days = 0.0;
  double kwh = 0.0;
  double rate_used = 0.0;
  double cost = 0.0;
};

struct CostProjection {
  std::vector<YearlyCost> yearly;
  double total_cost = 0.0;
  int horizon_months = 0;
};

struct CostLine {
  std::string label;
  double cost = 0.0;
};

struct BreakdownLine {
  std::string label;
  double cost = 0.0;
  double percent_of_total = 0.0;
};

struct BreakdownReport {
  std::vector<BreakdownLine> categories;
  double total = 0.0;
};

inline constexpr const char* kEnergyCategory = "Energy usage";

/// Escalating-tariff cost of a steady daily consumption.
///
/// The horizon covers horizon_months * 365 / 12 days, cut into 365-day years; the last
/// slice may be partial. Year k is billed at rate * (1 + escalation)^k.
CostProjection project_cost(double kwh_per_day, const Tariff& tariff, int horizon_months);

/// Adds the energy line to `other`, computes shares, orders lines by descending cost.
BreakdownReport breakdown(double energy_cost, std::span<const CostLine> other,
                          std::string energy_label = kEnergyCategory);

std::string render_text(const CostProjection& projection, const std::string& currency = "$");
std::string render_text(const BreakdownReport& report, const std::string& currency = "$");
std::string to_json(const CostProjection& projection);
std::string to_json(const BreakdownReport& report);

}  // namespace watt
