#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "watt/powermodel.hpp"
#include "watt/trace.hpp"

namespace watt {

/// xorshift64* (Vigna 2016): state ^= state >> 12; state ^= state << 25; state ^= state >> 27;
/// output = state * 0x2545F4914F6CDD1D. The seed is expanded through one SplitMix64 step so
/// that any 64-bit seed (including 0) gives a non-zero state.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double gaussian();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

enum class WorkloadProfile { kIdle, kConstant, kDiurnal, kBursty };

std::string_view to_string(WorkloadProfile profile);
/// Throws InvalidArgument for unknown names.
WorkloadProfile parse_profile(std::string_view name);

/// Full-scale regressor magnitudes used by the generator. Chosen so that each term of the
/// reference coefficient set contributes a few to ~100 W.
struct RegressorScale {
  double mem = 4.0e6;
  double disk = 400.0;
  double net = 2.0e8;
};

struct SimConfig {
  Coefficients truth = Coefficients::Zero();
  double duration_s = 86400.0;
  double interval_s = 1.0;
  double noise_sigma_w = 0.0;
  std::uint64_t seed = 0;
  WorkloadProfile profile = WorkloadProfile::kBursty;
  RegressorScale scale{};
};

struct SimTrace {
  std::vector<MetricSample> metrics;
  std::vector<PowerSample> power;
  /// Samples whose noisy power fell below 1 W and were raised to it.
  std::size_t floored = 0;
};

void validate(const SimConfig& config);

/// Samples at t = k * interval_s for k = 0 .. floor(duration_s / interval_s) - 1.
SimTrace generate(const SimConfig& config);

std::string describe(const SimConfig& config);

}  // namespace watt
