#pragma once

#include "q1dlab/core.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace q1dlab {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Constants:
/// 0x9e3779b97f4a7c15, 0xbf58476d1ce4e5b9, 0x94d049bb133111eb.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the subordinate stream `index` derived from `master`. Trial i always
/// gets the same stream regardless of how trials are scheduled.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }  // [0, 1)
  double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }
  std::uint64_t bits() { return engine_(); }

  Rng split(std::uint64_t index) { return Rng(mix_seed(engine_(), index)); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

enum class Distribution { gaussian, rademacher, uniform_centered };

inline std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::gaussian: return "gaussian";
    case Distribution::rademacher: return "rademacher";
    case Distribution::uniform_centered: return "uniform-centered";
  }
  return "?";
}

inline Distribution parse_distribution(std::string_view name) {
  if (name == "gaussian") return Distribution::gaussian;
  if (name == "rademacher") return Distribution::rademacher;
  if (name == "uniform-centered" || name == "uniform") return Distribution::uniform_centered;
  throw ConfigError("unknown noise distribution '" + std::string(name) +
                    "' (expected gaussian, rademacher or uniform-centered)");
}

/// Law of the diagonal potential. Every distribution has mean 0 and variance 1
/// before `amplitude` is applied.
struct NoiseSpec {
  Distribution distribution = Distribution::gaussian;
  double amplitude = 1.0;
  std::uint64_t seed = 0;

  double draw(Rng& rng) const {
    switch (distribution) {
      case Distribution::gaussian: return amplitude * rng.normal();
      case Distribution::rademacher: return amplitude * rng.rademacher();
      case Distribution::uniform_centered:
        return amplitude * std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    }
    return 0.0;
  }

  /// Same law, independent stream for trial `index`.
  NoiseSpec for_trial(std::uint64_t index) const {
    NoiseSpec out = *this;
    out.seed = mix_seed(seed, index);
    return out;
  }
};

}  // namespace q1dlab
