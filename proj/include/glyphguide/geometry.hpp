#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "glyphguide/grid.hpp"
#include "glyphguide/vec2.hpp"

namespace glyphguide {

// Closed simple polygon. Vertices are stored with positive signed area
// (shoelace formula in the given coordinates).
class PolygonMask {
 public:
  PolygonMask() = default;
  // Validates (>= 4 vertices, finite, non-self-intersecting, non-zero area)
  // and reverses the order when the signed area is negative.
  explicit PolygonMask(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double signed_area() const;
  double area() const { return signed_area(); }
  Vec2 centroid() const;
  bool contains(Vec2 p) const;

  friend bool operator==(const PolygonMask&, const PolygonMask&) = default;

 private:
  std::vector<Vec2> vertices_;
};

double polygon_signed_area(std::span<const Vec2> pts);
bool polygon_contains(std::span<const Vec2> pts, Vec2 p);
bool polygons_overlap(const PolygonMask& a, const PolygonMask& b);
PolygonMask rotate_polygon(const PolygonMask& poly, double angle, Vec2 center);
PolygonMask translate_polygon(const PolygonMask& poly, Vec2 offset);
PolygonMask rect_polygon(double x, double y, double width, double height);

struct BezierCurve {
  std::array<Vec2, 4> control{};

  Vec2 at(double u) const;
  Vec2 derivative(double u) const;
  double arc_length(double u0 = 0.0, double u1 = 1.0, int samples = 128) const;

  friend bool operator==(const BezierCurve&, const BezierCurve&) = default;
};

struct OrientedRect {
  Vec2 center;
  double length = 0.0;     // extent along axis()
  double thickness = 0.0;  // extent across it
  double angle = 0.0;      // direction of the long side, in (-pi/2, pi/2]

  double area() const { return length * thickness; }
  Vec2 axis() const;
  Vec2 normal() const;
  std::array<Vec2, 4> corners() const;
};

struct TextSlice {
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  friend bool operator==(TextSlice, TextSlice) = default;
};

struct QuadSegment {
  Quad quad;
  double angle = 0.0;  // baseline direction vs +x, radians
  int index = 0;
  TextSlice text_slice;

  double length() const { return quad.top_length(); }
  double height() const { return quad.left_length(); }
};

// Maps flat-canvas points onto the user layout: p -> translation + scale * R(angle) p.
struct RigidTransform {
  double angle = 0.0;
  double scale = 1.0;
  Vec2 translation;

  Vec2 apply(Vec2 p) const { return translation + rotated(p, angle) * scale; }
  Vec2 invert(Vec2 q) const { return rotated(q - translation, -angle) / scale; }
};

struct FlatRect {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  Quad quad() const {
    return Quad{{Vec2{x, y}, Vec2{x + width, y}, Vec2{x + width, y + height}, Vec2{x, y + height}}};
  }
};

struct FlatLayout {
  int canvas_height = 0;
  int canvas_width = 0;
  std::vector<FlatRect> rects;
  std::vector<RigidTransform> transforms;
  std::vector<TextSlice> slices;
};

inline constexpr double kFlatGutter = 4.0;
inline constexpr double kMaxChordDeviation = 0.08;
inline constexpr double kSplitFilterDegrees = 5.0;

std::pair<BezierCurve, BezierCurve> fit_boundary_beziers(const PolygonMask& poly);
BezierCurve baseline(const BezierCurve& upper, const BezierCurve& lower);
BezierCurve fit_cubic(std::span<const Vec2> points);

OrientedRect min_area_rect(std::span<const Vec2> points);
inline OrientedRect min_area_rect(const PolygonMask& poly) { return min_area_rect(poly.vertices()); }
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

std::vector<double> split_points(const BezierCurve& base, const OrientedRect& rect);
// Largest distance from base(u), u in [u0,u1], to the chord base(u0)-base(u1), over the chord length.
double chord_deviation(const BezierCurve& base, double u0, double u1);

// Everything divide_mask computed on the way, for debugging and inspection.
struct Decomposition {
  BezierCurve upper;
  BezierCurve lower;
  BezierCurve base;
  OrientedRect rect;
  std::vector<double> split_u;     // tangent splits that survived filtering
  std::vector<double> boundaries;  // final segment parameter boundaries, 0 ... 1
  std::vector<QuadSegment> segments;
};

Decomposition decompose_mask(const PolygonMask& poly, std::string_view text);
std::vector<QuadSegment> divide_mask(const PolygonMask& poly, std::string_view text);

// A single segment covering an axis-aligned or rotated rectangle; used for flat layouts.
QuadSegment segment_from_quad(const Quad& quad, int index, TextSlice slice);
std::vector<QuadSegment> flat_segments(const FlatLayout& layout);

FlatLayout flatten_segments(std::span<const QuadSegment> segments, int canvas_height,
                            int canvas_width);

// Binary coverage at (h / downscale, w / downscale); a cell is 1 iff its
// center (in full-resolution pixels) lies inside any region.
RegionMask rasterize_mask(std::span<const PolygonMask> polys, int height, int width,
                          int downscale);
RegionMask rasterize_quads(std::span<const Quad> quads, int height, int width, int downscale);

}  // namespace glyphguide
