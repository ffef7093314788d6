#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace glyphguide {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
inline constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

inline Vec2 normalized(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}

// Counter-clockwise in a y-up frame; in image coordinates (y down) this turns clockwise on screen.
inline Vec2 rotated(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 lerp(Vec2 a, Vec2 b, double t) { return a + (b - a) * t; }

// Corners ordered upper-left, upper-right, lower-right, lower-left in reading order.
struct Quad {
  std::array<Vec2, 4> corners{};

  // Bilinear map from (u, v) in [0,1]^2; u runs along the top edge, v down the left edge.
  Vec2 point_at(double u, double v) const {
    const Vec2 top = lerp(corners[0], corners[1], u);
    const Vec2 bottom = lerp(corners[3], corners[2], u);
    return lerp(top, bottom, v);
  }

  // Inverse of point_at by Newton iteration; empty when it fails to converge.
  std::optional<Vec2> local_coords(Vec2 p) const;

  double signed_area() const;
  double area() const { return std::abs(signed_area()); }
  bool contains(Vec2 p) const;
  bool is_convex() const;
  Vec2 center() const { return (corners[0] + corners[1] + corners[2] + corners[3]) * 0.25; }
  double top_length() const { return distance(corners[0], corners[1]); }
  double left_length() const { return distance(corners[0], corners[3]); }

  friend bool operator==(const Quad&, const Quad&) = default;
};

}  // namespace glyphguide
