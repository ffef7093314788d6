#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "glyphguide/geometry.hpp"

namespace testing {

inline double bounding_area(const std::vector<glyphguide::Vec2>& pts, double a) {
  const double c = std::cos(a), s = std::sin(a);
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& p : pts) {
    const double u = p.x * c + p.y * s;
    const double v = -p.x * s + p.y * c;
    x0 = std::min(x0, u);
    x1 = std::max(x1, u);
    y0 = std::min(y0, v);
    y1 = std::max(y1, v);
  }
  return (x1 - x0) * (y1 - y0);
}

// Minimum bounding-box area over a 0.01 degree sweep of orientations.
inline double sweep_min_rect_area(const std::vector<glyphguide::Vec2>& pts, double* best_angle = nullptr) {
  double best = 1e300;
  for (int k = 0; k < 9000; ++k) {
    const double a = k * 0.01 * std::numbers::pi / 180.0;
    const double area = bounding_area(pts, a);
    if (area < best) {
      best = area;
      if (best_angle) *best_angle = a;
    }
  }
  return best;
}

// The sweep, then a ternary search inside the best sample's +-0.01 degree
// bracket; removes the sweep's discretization error.
inline double brute_min_rect_area(const std::vector<glyphguide::Vec2>& pts) {
  double a = 0.0;
  const double swept = sweep_min_rect_area(pts, &a);
  const double step = 0.01 * std::numbers::pi / 180.0;
  double lo = a - step, hi = a + step;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (bounding_area(pts, m1) < bounding_area(pts, m2)) hi = m2;
    else lo = m1;
  }
  return std::min(swept, bounding_area(pts, 0.5 * (lo + hi)));
}

// Star-shaped decagon with sorted angles, so it is always simple.
inline std::vector<glyphguide::Vec2> random_decagon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> rad(5.0, 30.0);
  std::vector<double> a(10);
  for (double& v : a) v = ang(rng);
  std::sort(a.begin(), a.end());
  std::vector<glyphguide::Vec2> pts;
  for (double t : a) {
    const double r = rad(rng);
    pts.push_back({50.0 + r * std::cos(t), 50.0 + r * std::sin(t)});
  }
  return pts;
}

inline glyphguide::PolygonMask rotated_rect(double cx, double cy, double len, double thick, double angle) {
  std::vector<glyphguide::Vec2> pts;
  for (auto [sx, sy] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) {
    const glyphguide::Vec2 local{sx * len / 2, sy * thick / 2};
    pts.push_back(glyphguide::Vec2{cx, cy} + glyphguide::rotated(local, angle));
  }
  return glyphguide::PolygonMask(pts);
}

// Annular half-ring opening downward, centered at (64, 90).
inline glyphguide::PolygonMask arc_mask(double outer = 50.0, double inner = 30.0) {
  std::vector<glyphguide::Vec2> pts;
  for (int i = 0; i <= 20; ++i) {
    const double t = std::numbers::pi * (1.0 - i / 20.0);
    pts.push_back({64.0 + outer * std::cos(t), 90.0 - outer * std::sin(t)});
  }
  for (int i = 0; i <= 20; ++i) {
    const double t = std::numbers::pi * (i / 20.0);
    pts.push_back({64.0 + inner * std::cos(t), 90.0 - inner * std::sin(t)});
  }
  return glyphguide::PolygonMask(pts);
}

// Smallest absolute difference between two line directions (mod pi).
inline double line_angle_error(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  return std::min(d, std::numbers::pi - d);
}

}  // namespace testing
