#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace glyphguide {

// splitmix64 finalizer; derives independent stream seeds from one run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& engine);

// Standard normal source (Box-Muller over mt19937_64).
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed, std::uint64_t stream = 0);

  double next();
  void fill(std::span<double> out);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace glyphguide
