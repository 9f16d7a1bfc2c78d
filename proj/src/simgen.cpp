#include "watt/simgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "watt/error.hpp"

namespace watt {

XorShift64Star::XorShift64Star(std::uint64_t seed) {
  // SplitMix64 finalizer.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  state_ = z != 0 ? z : 0x9E3779B97F4A7C15ULL;
}

std::uint64_t XorShift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

double XorShift64Star::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double XorShift64Star::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::string_view to_string(WorkloadProfile profile) {
  switch (profile) {
    case WorkloadProfile::kIdle: return "idle";
    case WorkloadProfile::kConstant: return "constant";
    case WorkloadProfile::kDiurnal: return "diurnal";
    case WorkloadProfile::kBursty: return "bursty";
  }
  return "unknown";
}

WorkloadProfile parse_profile(std::string_view name) {
  for (auto p : {WorkloadProfile::kIdle, WorkloadProfile::kConstant, WorkloadProfile::kDiurnal,
                 WorkloadProfile::kBursty}) {
    if (to_string(p) == name) return p;
  }
  throw InvalidArgument("unknown workload profile '" + std::string(name) +
                        "' (expected idle, constant, diurnal or bursty)");
}

void validate(const SimConfig& c) {
  if (!c.truth.allFinite()) throw InvalidArgument("simulation truth coefficients must be finite");
  if (!(c.interval_s > 0.0) || !std::isfinite(c.interval_s)) {
    throw InvalidArgument("interval_s must be positive");
  }
  if (!(c.duration_s >= 2.0 * c.interval_s) || !std::isfinite(c.duration_s)) {
    throw InvalidArgument("duration_s must be at least twice interval_s");
  }
  if (!(c.noise_sigma_w >= 0.0) || !std::isfinite(c.noise_sigma_w)) {
    throw InvalidArgument("noise_sigma_w must be >= 0");
  }
  if (!(c.scale.mem > 0.0) || !(c.scale.disk > 0.0) || !(c.scale.net > 0.0)) {
    throw InvalidArgument("regressor scales must be positive");
  }
}

namespace {

// Per-regressor levels in [0, 1] for the four regressors, in order cpu, mem, disk, net.
using Levels = std::array<double, 4>;

// Square-wave periods in samples. Distinct primes, so no wave is a combination of the others.
constexpr std::array<std::uint64_t, 4> kBurstPeriods{37, 53, 71, 97};

class LevelSource {
 public:
  LevelSource(const SimConfig& c, XorShift64Star& rng) : config_(c), rng_(rng) {
    for (std::size_t j = 0; j < 4; ++j) {
      phase_[j] = rng_.uniform();
      offset_[j] = rng_.next() % kBurstPeriods[j];
    }
  }

  Levels at(std::uint64_t k, double t) {
    Levels lv{};
    switch (config_.profile) {
      case WorkloadProfile::kIdle:
        break;
      case WorkloadProfile::kConstant:
        lv.fill(0.5);
        break;
      case WorkloadProfile::kDiurnal:
        for (std::size_t j = 0; j < 4; ++j) {
          const double wave = std::sin(2.0 * std::numbers::pi * (t / 86400.0 + phase_[j]));
          const double jitter = 0.1 * (rng_.uniform() - 0.5);
          lv[j] = std::clamp(0.5 + 0.4 * wave + jitter, 0.0, 1.0);
        }
        break;
      case WorkloadProfile::kBursty:
        for (std::size_t j = 0; j < 4; ++j) {
          const std::uint64_t period = kBurstPeriods[j];
          const bool on = (k + offset_[j]) % period < period / 2;
          const double u = rng_.uniform();
          lv[j] = on ? 0.7 + 0.3 * u : 0.05 * u;
        }
        break;
    }
    return lv;
  }

 private:
  const SimConfig& config_;
  XorShift64Star& rng_;
  std::array<double, 4> phase_{};
  std::array<std::uint64_t, 4> offset_{};
};

}  // namespace

SimTrace generate(const SimConfig& c) {
  validate(c);
  const auto count = static_cast<std::uint64_t>(std::floor(c.duration_s / c.interval_s));
  XorShift64Star workload_rng(c.seed);
  XorShift64Star noise_rng(c.seed ^ 0xD1B54A32D192ED03ULL);
  LevelSource levels(c, workload_rng);

  SimTrace out;
  out.metrics.reserve(count);
  out.power.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * c.interval_s;
    const Levels lv = levels.at(k, t);
    const MetricSample m{t, lv[0], lv[1] * c.scale.mem, lv[2] * c.scale.disk, lv[3] * c.scale.net};
    double watts = c.truth.dot(regressors(m));
    if (c.noise_sigma_w > 0.0) watts += c.noise_sigma_w * noise_rng.gaussian();
    if (!(watts >= 1.0)) {
      watts = 1.0;
      ++out.floored;
    }
    out.metrics.push_back(m);
    out.power.push_back({t, watts});
  }
  return out;
}

std::string describe(const SimConfig& c) {
  return fmt::format(
      "profile: {}\n"
      "duration_s: {}\n"
      "interval_s: {}\n"
      "noise_sigma_w: {}\n"
      "seed: {}\n"
      "alpha: {}\n"
      "beta_cpu: {}\n"
      "beta_mem: {}\n"
      "beta_disk: {}\n"
      "beta_net: {}\n",
      to_string(c.profile), c.duration_s, c.interval_s, c.noise_sigma_w, c.seed, c.truth(0), c.truth(1),
      c.truth(2), c.truth(3), c.truth(4));
}

}  // namespace watt
