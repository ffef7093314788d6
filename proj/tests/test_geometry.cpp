#include "doctest.h"
#include "geometry_oracles.hpp"
#include "glyphguide/geometry.hpp"

#include <numbers>

using namespace glyphguide;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("geometry") {

TEST_CASE("polygon validation") {
  CHECK_THROWS_AS(PolygonMask({{0, 0}, {1, 0}, {0, 1}}), GeometryError);
  CHECK_THROWS_AS(PolygonMask({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), GeometryError);  // bow tie
  CHECK_THROWS_AS(PolygonMask({{0, 0}, {1, 0}, {2, 0}, {3, 0}}), GeometryError);  // zero area
  CHECK_THROWS_AS(PolygonMask({{0, 0}, {1, 0}, {1, std::nan("")}, {0, 1}}), GeometryError);

  const PolygonMask cw({{0, 0}, {0, 2}, {3, 2}, {3, 0}});
  CHECK(cw.signed_area() == doctest::Approx(6.0));
  CHECK(cw.contains({1.5, 1.0}));
  CHECK_FALSE(cw.contains({4.0, 1.0}));
  CHECK(cw.centroid().x == doctest::Approx(1.5));
  CHECK(cw.centroid().y == doctest::Approx(1.0));
}

TEST_CASE("overlap test") {
  const PolygonMask a = rect_polygon(0, 0, 10, 10);
  CHECK(polygons_overlap(a, rect_polygon(5, 5, 10, 10)));
  CHECK_FALSE(polygons_overlap(a, rect_polygon(20, 0, 5, 5)));
  CHECK(polygons_overlap(a, rect_polygon(2, 2, 3, 3)));  // containment
}

TEST_CASE("convex hull drops interior points") {
  const std::vector<Vec2> pts{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}, {1, 3}, {2, 0}};
  const auto hull = convex_hull(pts);
  CHECK(hull.size() == 4);
  CHECK(std::abs(polygon_signed_area(hull)) == doctest::Approx(16.0));
}

TEST_CASE("min_area_rect of a right triangle") {
  // brute-force sweep gives 12 (the rectangle aligned with a leg)
  const std::vector<Vec2> tri{{0, 0}, {4, 0}, {0, 3}};
  CHECK(min_area_rect(tri).area() == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("min_area_rect recovers a rotated rectangle") {
  for (double deg : {0.0, 17.0, 45.0, 89.0, 90.0, 123.0}) {
    const PolygonMask r = testing::rotated_rect(40, 40, 30, 8, deg * kPi / 180.0);
    const OrientedRect box = min_area_rect(r);
    CHECK(box.length == doctest::Approx(30.0));
    CHECK(box.thickness == doctest::Approx(8.0));
    CHECK(testing::line_angle_error(box.angle, deg * kPi / 180.0) < 1e-9);
    CHECK(box.angle > -kPi / 2);
    CHECK(box.angle <= kPi / 2 + 1e-12);
  }
}

TEST_CASE("min_area_rect agrees with the brute-force sweep") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 5; ++i) {
    const auto pts = testing::random_decagon(rng);
    const double fast = min_area_rect(pts).area();
    CHECK(fast <= testing::sweep_min_rect_area(pts) + 1e-9);
    CHECK(std::abs(testing::brute_min_rect_area(pts) - fast) < 1e-6);
  }
}

TEST_CASE("fit_cubic keeps endpoints and reproduces a line") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 20; ++i) pts.push_back({i * 2.0, 5.0 + i});
  const BezierCurve c = fit_cubic(pts);
  CHECK(c.control[0] == pts.front());
  CHECK(c.control[3] == pts.back());
  for (double u : {0.1, 0.5, 0.9}) {
    const Vec2 p = c.at(u);
    CHECK(p.y - 5.0 == doctest::Approx(p.x / 2.0));
  }
  CHECK(c.arc_length() == doctest::Approx(std::hypot(40.0, 20.0)).epsilon(1e-6));
}

TEST_CASE("chord deviation of a straight baseline is zero") {
  const BezierCurve line{{Vec2{0, 0}, Vec2{1, 1}, Vec2{2, 2}, Vec2{3, 3}}};
  CHECK(chord_deviation(line, 0.0, 1.0) < 1e-12);
  const BezierCurve bent{{Vec2{0, 0}, Vec2{0, 10}, Vec2{10, 10}, Vec2{10, 0}}};
  CHECK(chord_deviation(bent, 0.0, 1.0) == doctest::Approx(0.75));
}

TEST_CASE("rotated rectangles decompose into one segment") {
  for (int deg = -80; deg <= 80; deg += 20) {
    const double a = deg * kPi / 180.0;
    const auto segs = divide_mask(testing::rotated_rect(64, 64, 90, 24, a), "TEXT");
    REQUIRE(segs.size() == 1);
    CHECK(std::abs(segs[0].angle - a) < 1e-3);
    CHECK(segs[0].text_slice == TextSlice{0, 4});
    CHECK(segs[0].length() == doctest::Approx(90.0).epsilon(1e-6));
    CHECK(segs[0].height() == doctest::Approx(24.0).epsilon(1e-6));
  }
}

TEST_CASE("an arc splits into several straight segments covering the text") {
  const std::string text = "CURVED";
  const Decomposition d = decompose_mask(testing::arc_mask(), text);
  REQUIRE(d.segments.size() >= 2);
  CHECK(d.segments.size() <= text.size());
  CHECK(d.boundaries.front() == 0.0);
  CHECK(d.boundaries.back() == 1.0);
  int next = 0;
  for (const auto& s : d.segments) {
    CHECK(s.text_slice.begin == next);
    CHECK(s.text_slice.size() >= 1);
    CHECK(s.quad.is_convex());
    next = s.text_slice.end;
  }
  CHECK(next == static_cast<int>(text.size()));
  // the baseline turns monotonically over a half ring, left to right
  for (std::size_t i = 1; i < d.segments.size(); ++i) CHECK(d.segments[i].angle > d.segments[i - 1].angle);
}

TEST_CASE("decomposition rejects empty text") {
  CHECK_THROWS(divide_mask(rect_polygon(0, 0, 50, 10), ""));
}

TEST_CASE("flatten round trip maps flat corners back onto segments") {
  for (const auto& poly : {testing::arc_mask(), testing::rotated_rect(64, 64, 80, 20, 0.7)}) {
    const auto segs = divide_mask(poly, "CURVED");
    const FlatLayout flat = flatten_segments(segs, 128, 128);
    REQUIRE(flat.rects.size() == segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const Quad fq = flat.rects[i].quad();
      for (int k = 0; k < 4; ++k) {
        CHECK(distance(flat.transforms[i].apply(fq.corners[k]), segs[i].quad.corners[k]) < 0.5);
        CHECK(distance(flat.transforms[i].invert(segs[i].quad.corners[k]), fq.corners[k]) < 0.5);
      }
      CHECK(flat.rects[i].x >= kFlatGutter);
      CHECK(flat.rects[i].x + flat.rects[i].width <= 128 - kFlatGutter + 1e-6);
      CHECK(flat.slices[i] == segs[i].text_slice);
    }
    // one common height
    for (const auto& r : flat.rects) CHECK(r.height == flat.rects[0].height);
  }
}

TEST_CASE("flatten reports the canvas it would need") {
  const auto segs = divide_mask(rect_polygon(0, 0, 200, 20), "WIDE");
  try {
    (void)flatten_segments(segs, 128, 128);
    FAIL("expected LayoutError");
  } catch (const LayoutError& e) {
    CHECK(std::string(e.what()).find("208") != std::string::npos);
  }
}

TEST_CASE("flat layout of an exactly fitting row") {
  const auto segs = divide_mask(rect_polygon(4, 10, 120, 36), "QUIZ7");
  const FlatLayout flat = flatten_segments(segs, 128, 128);
  CHECK(flat.rects[0].x == kFlatGutter);
  const auto turned = divide_mask(rotate_polygon(rect_polygon(4, 10, 120, 36), 0.4, {64, 28}), "QUIZ7");
  CHECK_NOTHROW(flatten_segments(turned, 128, 128));
}

TEST_CASE("rasterize_mask counts cell centers") {
  const std::vector<PolygonMask> polys{rect_polygon(0, 0, 10, 6)};
  const RegionMask full = rasterize_mask(polys, 16, 16, 1);
  double n = 0.0;
  for (double v : full.values()) n += v;
  CHECK(n == 60.0);
  const RegionMask half = rasterize_mask(polys, 16, 16, 2);
  CHECK(half.height() == 8);
  n = 0.0;
  for (double v : half.values()) n += v;
  CHECK(n == 15.0);
}

TEST_CASE("boundary fits of rectangles are straight") {
  auto collinear = [](const BezierCurve& c) {
    const Vec2 d = normalized(c.control[3] - c.control[0]);
    double worst = 0.0;
    for (const Vec2& p : c.control) worst = std::max(worst, std::abs(cross(p - c.control[0], d)));
    return worst;
  };
  const auto [up, lo] = fit_boundary_beziers(rect_polygon(10, 20, 80, 30));
  CHECK(collinear(up) < 1e-6);
  CHECK(collinear(lo) < 1e-6);
  CHECK(up.control[0].y == doctest::Approx(20.0));
  CHECK(lo.control[0].y == doctest::Approx(50.0));

  const double a = 40.0 * kPi / 180.0;
  const auto [up40, lo40] = fit_boundary_beziers(testing::rotated_rect(64, 64, 80, 20, a));
  for (const BezierCurve* c : {&up40, &lo40}) {
    CHECK(collinear(*c) < 1e-6);
    CHECK(testing::line_angle_error(std::atan2((c->control[3] - c->control[0]).y,
                                               (c->control[3] - c->control[0]).x),
                                    a) < 1e-9);
  }
}

TEST_CASE("boundary fits of a sparsely sampled arc band") {
  const double outer = 50.0, inner = 30.0;
  std::vector<Vec2> pts;
  for (int i = 0; i < 16; ++i) {
    const double t = kPi * (1.0 - i / 15.0);
    pts.push_back({64.0 + outer * std::cos(t), 90.0 - outer * std::sin(t)});
  }
  for (int i = 0; i < 16; ++i) {
    const double t = kPi * (i / 15.0);
    pts.push_back({64.0 + inner * std::cos(t), 90.0 - inner * std::sin(t)});
  }
  const auto [up, lo] = fit_boundary_beziers(PolygonMask(pts));
  const double band_length = kPi * (outer + inner) / 2.0;
  // Distance from dense arc samples to a dense sampling of the fitted curve.
  auto residual = [](const BezierCurve& c, double r) {
    std::vector<Vec2> curve;
    for (int k = 0; k <= 4000; ++k) curve.push_back(c.at(k / 4000.0));
    double worst = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double t = kPi * k / 2000.0;
      const Vec2 p{64.0 + r * std::cos(t), 90.0 - r * std::sin(t)};
      double best = 1e300;
      for (const Vec2& q : curve) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  CHECK(residual(up, outer) < 0.02 * band_length);
  CHECK(residual(lo, inner) < 0.02 * band_length);
}

TEST_CASE("baseline averages control points") {
  const BezierCurve top{{Vec2{0, 0}, Vec2{3, 0}, Vec2{6, 0}, Vec2{9, 0}}};
  const BezierCurve bottom{{Vec2{0, 2}, Vec2{3, 2}, Vec2{6, 2}, Vec2{9, 2}}};
  CHECK(baseline(top, top) == top);
  for (const Vec2& p : baseline(top, bottom).control) CHECK(p.y == 1.0);
  const BezierCurve odd{{Vec2{1, 7}, Vec2{-2, 4}, Vec2{5, 5}, Vec2{8, -1}}};
  CHECK(baseline(odd, bottom) == baseline(bottom, odd));
}

TEST_CASE("min_area_rect of axis-aligned and 25 degree rectangles") {
  const OrientedRect box = min_area_rect(rect_polygon(3, 4, 20, 10));
  CHECK(box.area() == doctest::Approx(200.0));
  CHECK(std::fmod(std::abs(box.angle), kPi / 2) < 1e-12);
  const double a = 25.0 * kPi / 180.0;
  const OrientedRect turned = min_area_rect(rotate_polygon(rect_polygon(3, 4, 20, 10), a, {13, 9}));
  CHECK(turned.length == doctest::Approx(20.0));
  CHECK(turned.thickness == doctest::Approx(10.0));
  CHECK(std::fmod(std::fmod(turned.angle - a, kPi / 2) + kPi / 2, kPi / 2) < 1e-9);
}

TEST_CASE("split points") {
  const OrientedRect axis_box{{0, 0}, 10, 10, 0.0};
  const BezierCurve straight{{Vec2{0, 0}, Vec2{1, 2}, Vec2{2, 4}, Vec2{3, 6}}};
  CHECK(split_points(straight, axis_box).empty());

  // Cubic approximation of a half circle, bulging towards -y.
  const double k = 4.0 / 3.0;
  const BezierCurve semi{{Vec2{-10, 0}, Vec2{-10, -10 * k}, Vec2{10, -10 * k}, Vec2{10, 0}}};
  double oracle = 0.0, best = 1e300;
  for (int i = 1; i < 10000; ++i) {
    const double u = i / 10000.0;
    const Vec2 d = normalized(semi.derivative(u));
    const double off = std::min(std::abs(d.y), std::abs(d.x));
    if (off < best) {
      best = off;
      oracle = u;
    }
  }
  const auto su = split_points(semi, axis_box);
  REQUIRE(su.size() == 1);
  CHECK(std::abs(su[0] - oracle) < 1e-3);

  // Point-symmetric S-curve: horizontal, vertical (at u = 0.5), horizontal.
  const BezierCurve s_curve{{Vec2{0, 0}, Vec2{30, 20}, Vec2{0, -20}, Vec2{30, 0}}};
  const auto u = split_points(s_curve, OrientedRect{{15, 0}, 30, 20, 0.0});
  REQUIRE(u.size() == 3);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(u[i] - (1.0 - u[u.size() - 1 - i])) < 1e-3);
}

TEST_CASE("a half ring with twelve characters") {
  const auto segs = divide_mask(testing::arc_mask(), "TWELVELETTER");
  REQUIRE(segs.size() >= 2);
  int next = 0;
  for (const auto& s : segs) {
    CHECK(s.text_slice.begin == next);
    next = s.text_slice.end;
  }
  CHECK(next == 12);
}

TEST_CASE("flattening single segments") {
  const auto segs = divide_mask(rect_polygon(10, 20, 60, 30), "HI");
  const FlatLayout flat = flatten_segments(segs, 128, 128);
  REQUIRE(flat.rects.size() == 1);
  CHECK(flat.rects[0].width == doctest::Approx(60.0));
  CHECK(flat.rects[0].height == doctest::Approx(30.0));
  CHECK(std::abs(flat.transforms[0].angle) < 1e-12);
  CHECK(flat.transforms[0].scale == doctest::Approx(1.0));

  const auto slanted = divide_mask(testing::rotated_rect(64, 64, 60, 20, 40.0 * kPi / 180.0), "HI");
  const FlatLayout f40 = flatten_segments(slanted, 128, 128);
  REQUIRE(f40.rects.size() == 1);
  const Quad fq = f40.rects[0].quad();
  for (int c = 0; c < 4; ++c) CHECK(distance(f40.transforms[0].apply(fq.corners[c]), slanted[0].quad.corners[c]) < 0.5);
}

TEST_CASE("flat rects of an arc do not overlap") {
  const auto segs = divide_mask(testing::arc_mask(), "CURVED");
  const FlatLayout flat = flatten_segments(segs, 128, 128);
  for (std::size_t i = 0; i < flat.rects.size(); ++i)
    for (std::size_t j = i + 1; j < flat.rects.size(); ++j) {
      const FlatRect& a = flat.rects[i];
      const FlatRect& b = flat.rects[j];
      const bool apart = a.x + a.width <= b.x || b.x + b.width <= a.x || a.y + a.height <= b.y ||
                         b.y + b.height <= a.y;
      CHECK(apart);
    }
}

TEST_CASE("rasterize_mask edge cases") {
  const std::vector<PolygonMask> full{rect_polygon(0, 0, 32, 32)};
  const RegionMask covered = rasterize_mask(full, 32, 32, 2);
  for (double v : covered.values()) CHECK(v == 1.0);
  const RegionMask empty = rasterize_mask(std::span<const PolygonMask>{}, 32, 32, 1);
  for (double v : empty.values()) CHECK(v == 0.0);
  const std::vector<PolygonMask> diamond{testing::rotated_rect(64, 64, 60, 60, kPi / 4)};
  double n = 0.0;
  const RegionMask dm = rasterize_mask(diamond, 128, 128, 1);
  for (double v : dm.values()) n += v;
  CHECK(std::abs(n - 3600.0) < 0.03 * 3600.0);
}

TEST_CASE("rigid transforms invert") {
  const RigidTransform t{0.3, 1.7, {5.0, -2.0}};
  const Vec2 p{3.0, 4.0};
  CHECK(distance(t.invert(t.apply(p)), p) < 1e-12);
}

}
