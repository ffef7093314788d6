#pragma once

// Cell-by-cell scalar re-evaluations of the guidance and sampler equations,
// written without the library's grid helpers.

#include <algorithm>
#include <cmath>
#include <vector>

#include "glyphguide/grid.hpp"

namespace testing {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Welford's update, population variance.
inline Moments plane_moments(const glyphguide::LatentGrid& g, int c) {
  double mean = 0.0, m2 = 0.0;
  int n = 0;
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      const double v = g.at(c, y, x);
      ++n;
      const double d = v - mean;
      mean += d / n;
      m2 += d * (v - mean);
    }
  return {mean, std::sqrt(m2 / n)};
}

inline double adain_cell(const glyphguide::LatentGrid& content, const glyphguide::LatentGrid& style, int c,
                         int y, int x) {
  const Moments mc = plane_moments(content, c);
  const Moments ms = plane_moments(style, c);
  return (content.at(c, y, x) - mc.mean) / std::max(mc.std, 1e-5) * ms.std + ms.mean;
}

// Semantic rectification: prior (optionally renormalized to z_t) inside l_p, z_t outside.
inline double rectify_cell(const glyphguide::LatentGrid& z_t, const glyphguide::LatentGrid& z_f,
                           const glyphguide::RegionMask& l_p, bool use_adain, int c, int y, int x) {
  const double m = l_p.at(0, y, x);
  const double f = use_adain ? adain_cell(z_f, z_t, c, y, x) : z_f.at(c, y, x);
  return f * m + z_t.at(c, y, x) * (1.0 - m);
}

inline double merge_cell(double z_tilde, double adain_g, double rho) { return rho * adain_g + (1.0 - rho) * z_tilde; }

inline double guidance_cell(double z_t, double z_hat, double m, double lambda, double kappa) {
  return (kappa * lambda * z_hat + (1.0 - kappa) * z_t) * m + z_t * (1.0 - m);
}

inline double x0_cell(double z, double eps, double abar) { return (z - std::sqrt(1.0 - abar) * eps) / std::sqrt(abar); }

// Deterministic DDIM update t -> t-1.
inline double ddim_cell(double z, double eps, double abar_t, double abar_prev) {
  const double x0 = x0_cell(z, eps, abar_t);
  return std::sqrt(abar_prev) * x0 + std::sqrt(1.0 - abar_prev) * eps;
}

}  // namespace testing
