#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "glyphguide/grid.hpp"

namespace testing {

inline glyphguide::LatentGrid random_grid(std::mt19937_64& rng, int c, int h, int w, double lo = -2.0,
                                          double hi = 2.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  glyphguide::LatentGrid g(c, h, w);
  for (double& v : g.values()) v = d(rng);
  return g;
}

inline glyphguide::RegionMask random_mask(std::mt19937_64& rng, int h, int w) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  glyphguide::RegionMask m(1, h, w);
  for (double& v : m.values()) {
    const double r = d(rng);
    v = r < 0.3 ? 0.0 : (r > 0.7 ? 1.0 : d(rng));
  }
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(GLYPHGUIDE_SCRATCH) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
