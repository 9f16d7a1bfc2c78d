#include "watt/powermodel.hpp"

#include <cmath>
#include <istream>
#include <iterator>
#include <ostream>

#include <nlohmann/json.hpp>

#include "watt/error.hpp"

namespace watt {
namespace {

using nlohmann::json;

constexpr const char* kCoefficientKeys[5] = {"alpha", "beta_cpu", "beta_mem", "beta_disk", "beta_net"};
constexpr const char* kVectorKeys[3] = {"std_errors", "t_stats", "p_values"};

json to_array(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

const json& require(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError("model: missing field '" + path + key + "'");
  return *it;
}

double require_number(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_number()) throw DataError("model: field '" + path + key + "' must be a number");
  return v.get<double>();
}

std::size_t require_count(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_number_unsigned()) {
    throw DataError("model: field '" + path + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

Eigen::VectorXd require_vector(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_array() || v.size() != 5) {
    throw DataError("model: field '" + path + key + "' must be an array of 5 numbers");
  }
  Eigen::VectorXd out(5);
  for (std::size_t i = 0; i < 5; ++i) {
    if (!v[i].is_number()) throw DataError("model: field '" + path + key + "' must hold numbers");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

}  // namespace

PowerModel make_model(const Coefficients& coefficients, std::string hardware_id) {
  PowerModel m;
  m.coefficients = coefficients;
  m.hardware_id = std::move(hardware_id);
  m.diagnostics.std_errors = Eigen::VectorXd::Zero(5);
  m.diagnostics.t_stats = Eigen::VectorXd::Zero(5);
  m.diagnostics.p_values = Eigen::VectorXd::Ones(5);
  m.diagnostics.df = 1;
  return m;
}

PowerModel train(const AlignedTrace& trace, std::string hardware_id, double created_at) {
  const auto fit = fit_ols(make_design<double>(trace));
  PowerModel m;
  m.coefficients = fit.coefficients;
  m.diagnostics = fit.diagnostics;
  m.hardware_id = std::move(hardware_id);
  m.created_at = created_at;
  return m;
}

EvaluationReport evaluate(const PowerModel& model, const AlignedTrace& trace) {
  if (trace.rows.empty()) throw DataError("cannot evaluate on an empty trace");
  EvaluationReport report;
  double sum_pct = 0.0;
  for (const auto& row : trace.rows) {
    const double err = std::abs(predict(model, row) - row.power_w);
    sum_pct += err / row.power_w;
    report.max_abs_error_w = std::max(report.max_abs_error_w, err);
  }
  report.n = trace.rows.size();
  report.mape = 100.0 * sum_pct / static_cast<double>(report.n);
  report.accuracy = 100.0 - report.mape;
  return report;
}

void validate(const PowerModel& m) {
  if (!m.coefficients.allFinite()) throw DataError("model: coefficients must be finite");
  const auto& d = m.diagnostics;
  if (!std::isfinite(d.r_squared) || d.r_squared < 0.0 || d.r_squared > 1.0) {
    throw DataError("model: r_squared must lie in [0,1]");
  }
  if (!std::isfinite(d.residual_sigma) || d.residual_sigma < 0.0) {
    throw DataError("model: residual_sigma must be finite and >= 0");
  }
  if (d.std_errors.size() != 5 || d.t_stats.size() != 5 || d.p_values.size() != 5) {
    throw DataError("model: diagnostics vectors must have 5 entries");
  }
  if (!d.std_errors.allFinite() || !d.t_stats.allFinite() || !d.p_values.allFinite()) {
    throw DataError("model: diagnostics must be finite");
  }
  if ((d.std_errors.array() < 0.0).any()) throw DataError("model: std_errors must be >= 0");
  if ((d.p_values.array() < 0.0).any() || (d.p_values.array() > 1.0).any()) {
    throw DataError("model: p_values must lie in [0,1]");
  }
  if (d.df < 1) throw DataError("model: df must be >= 1");
  if (!std::isfinite(m.created_at)) throw DataError("model: created_at must be finite");
}

std::string save_model(const PowerModel& m) {
  validate(m);
  json doc;
  for (int i = 0; i < 5; ++i) doc[kCoefficientKeys[i]] = m.coefficients(i);
  doc["diagnostics"] = {
      {"r_squared", m.diagnostics.r_squared},
      {"residual_sigma", m.diagnostics.residual_sigma},
      {"std_errors", to_array(m.diagnostics.std_errors)},
      {"t_stats", to_array(m.diagnostics.t_stats)},
      {"p_values", to_array(m.diagnostics.p_values)},
      {"df", m.diagnostics.df},
      {"n_samples", m.diagnostics.n_samples},
  };
  doc["hardware_id"] = m.hardware_id;
  doc["created_at"] = m.created_at;
  return doc.dump(2) + "\n";
}

void save_model(std::ostream& out, const PowerModel& model) { out << save_model(model); }

PowerModel load_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("model: document must be a JSON object");

  PowerModel m;
  for (int i = 0; i < 5; ++i) m.coefficients(i) = require_number(doc, "", kCoefficientKeys[i]);

  const json& diag = require(doc, "", "diagnostics");
  if (!diag.is_object()) throw DataError("model: field 'diagnostics' must be an object");
  const std::string path = "diagnostics.";
  m.diagnostics.r_squared = require_number(diag, path, "r_squared");
  m.diagnostics.residual_sigma = require_number(diag, path, "residual_sigma");
  m.diagnostics.std_errors = require_vector(diag, path, kVectorKeys[0]);
  m.diagnostics.t_stats = require_vector(diag, path, kVectorKeys[1]);
  m.diagnostics.p_values = require_vector(diag, path, kVectorKeys[2]);
  m.diagnostics.df = require_count(diag, path, "df");
  m.diagnostics.n_samples = require_count(diag, path, "n_samples");

  const json& hw = require(doc, "", "hardware_id");
  if (!hw.is_string()) throw DataError("model: field 'hardware_id' must be a string");
  m.hardware_id = hw.get<std::string>();
  m.created_at = require_number(doc, "", "created_at");

  validate(m);
  return m;
}

PowerModel load_model(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return load_model(text);
}

}  // namespace watt
