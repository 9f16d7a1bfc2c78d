#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "watt/regression.hpp"
#include "watt/trace.hpp"

namespace watt {

using Coefficients = Eigen::Matrix<double, 5, 1>;

/// Affine host power model: power = alpha + b_cpu*cpu + b_mem*mem + b_disk*disk + b_net*net.
///
/// `coefficients` is ordered (alpha, cpu, mem, disk, net). Alpha is the idle (baseline)
/// draw of the host; the betas carry the trace-native units of their regressors.
struct PowerModel {
  Coefficients coefficients = Coefficients::Zero();
  FitDiagnostics diagnostics;
  std::string hardware_id;
  double created_at = 0.0;

  double alpha() const { return coefficients(0); }
  double beta_cpu() const { return coefficients(1); }
  double beta_mem() const { return coefficients(2); }
  double beta_disk() const { return coefficients(3); }
  double beta_net() const { return coefficients(4); }

  friend bool operator==(const PowerModel& a, const PowerModel& b) {
    return a.coefficients == b.coefficients && a.diagnostics == b.diagnostics &&
           a.hardware_id == b.hardware_id && a.created_at == b.created_at;
  }
};

/// Model with the given coefficients and empty (but valid) diagnostics.
PowerModel make_model(const Coefficients& coefficients, std::string hardware_id = {});

struct EvaluationReport {
  double mape = 0.0;      // percent
  double accuracy = 0.0;  // 100 - mape
  double max_abs_error_w = 0.0;
  std::size_t n = 0;
};

/// Fits a model to an aligned trace. Needs at least 6 rows.
PowerModel train(const AlignedTrace& trace, std::string hardware_id = {}, double created_at = 0.0);

/// Unclamped model output in watts.
inline double predict(const PowerModel& model, const MetricSample& sample) {
  return model.coefficients.dot(regressors(sample));
}

inline double predict(const PowerModel& model, const AlignedRow& row) {
  return model.coefficients.dot(regressors(row));
}

/// Mean absolute percentage error against measured power.
EvaluationReport evaluate(const PowerModel& model, const AlignedTrace& trace);

/// Throws DataError when coefficients or diagnostics are out of their domain.
void validate(const PowerModel& model);

std::string save_model(const PowerModel& model);
void save_model(std::ostream& out, const PowerModel& model);
PowerModel load_model(std::string_view text);
PowerModel load_model(std::istream& in);

}  // namespace watt
