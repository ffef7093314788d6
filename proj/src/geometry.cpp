#include "glyphguide/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <string>

#include "glyphguide/error.hpp"

namespace glyphguide {

namespace {

constexpr double kPi = std::numbers::pi;

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (std::abs(v) < 1e-12) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double turn_angle(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 u = normalized(b - a);
  const Vec2 v = normalized(c - b);
  return std::acos(std::clamp(dot(u, v), -1.0, 1.0));
}

std::vector<Vec2> resample_polyline(const std::vector<Vec2>& pts, int count) {
  std::vector<double> acc(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) acc[i] = acc[i - 1] + distance(pts[i - 1], pts[i]);
  const double total = acc.back();
  std::vector<Vec2> out;
  out.reserve(count);
  std::size_t seg = 1;
  for (int k = 0; k < count; ++k) {
    const double target = total * k / (count - 1);
    while (seg + 1 < pts.size() && acc[seg] < target) ++seg;
    const double len = acc[seg] - acc[seg - 1];
    const double t = len > 0 ? std::clamp((target - acc[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(lerp(pts[seg - 1], pts[seg], t));
  }
  out.front() = pts.front();
  out.back() = pts.back();
  return out;
}

// Unit tangent with a fallback for vanishing derivatives at the ends.
Vec2 unit_tangent(const BezierCurve& c, double u) {
  Vec2 d = c.derivative(u);
  if (norm(d) < 1e-12) d = c.at(std::min(1.0, u + 1e-4)) - c.at(std::max(0.0, u - 1e-4));
  return normalized(d);
}

double normalize_half_turn(double angle) {
  while (angle > kPi / 2 + 1e-9) angle -= kPi;
  while (angle <= -kPi / 2 + 1e-9) angle += kPi;
  return angle;
}

}  // namespace

double polygon_signed_area(std::span<const Vec2> pts) {
  double a = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) a += cross(pts[i], pts[(i + 1) % pts.size()]);
  return 0.5 * a;
}

bool polygon_contains(std::span<const Vec2> pts, Vec2 p) {
  bool inside = false;
  const std::size_t n = pts.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = pts[i];
    const Vec2 b = pts[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

PolygonMask::PolygonMask(std::vector<Vec2> vertices) {
  std::vector<Vec2> v;
  for (const Vec2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("polygon vertex is not finite");
    if (v.empty() || distance(v.back(), p) > 1e-12) v.push_back(p);
  }
  while (v.size() > 1 && distance(v.front(), v.back()) <= 1e-12) v.pop_back();
  if (v.size() < 4) {
    throw GeometryError("polygon needs at least 4 distinct vertices, got " + std::to_string(v.size()));
  }
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        throw GeometryError("polygon edges " + std::to_string(i) + " and " + std::to_string(j) +
                            " intersect");
      }
    }
  }
  const double area = polygon_signed_area(v);
  if (std::abs(area) < 1e-9) throw GeometryError("polygon has zero area");
  if (area < 0) std::reverse(v.begin(), v.end());
  vertices_ = std::move(v);
}

double PolygonMask::signed_area() const { return polygon_signed_area(vertices_); }

Vec2 PolygonMask::centroid() const {
  double a = 0.0;
  Vec2 c;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = vertices_[i];
    const Vec2 q = vertices_[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    c += (p + q) * w;
  }
  return c / (3.0 * a);
}

bool PolygonMask::contains(Vec2 p) const { return polygon_contains(vertices_, p); }

bool polygons_overlap(const PolygonMask& a, const PolygonMask& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < vb.size(); ++j) {
      if (segments_intersect(va[i], va[(i + 1) % va.size()], vb[j], vb[(j + 1) % vb.size()])) {
        return true;
      }
    }
  }
  return a.contains(vb.front()) || b.contains(va.front());
}

PolygonMask rotate_polygon(const PolygonMask& poly, double angle, Vec2 center) {
  if (angle == 0.0) return poly;
  std::vector<Vec2> out;
  for (const Vec2& p : poly.vertices()) out.push_back(center + rotated(p - center, angle));
  return PolygonMask(std::move(out));
}

PolygonMask translate_polygon(const PolygonMask& poly, Vec2 offset) {
  std::vector<Vec2> out;
  for (const Vec2& p : poly.vertices()) out.push_back(p + offset);
  return PolygonMask(std::move(out));
}

PolygonMask rect_polygon(double x, double y, double width, double height) {
  return PolygonMask({{x, y}, {x + width, y}, {x + width, y + height}, {x, y + height}});
}

Vec2 BezierCurve::at(double u) const {
  const double v = 1.0 - u;
  return control[0] * (v * v * v) + control[1] * (3 * v * v * u) + control[2] * (3 * v * u * u) +
         control[3] * (u * u * u);
}

Vec2 BezierCurve::derivative(double u) const {
  const double v = 1.0 - u;
  return ((control[1] - control[0]) * (v * v) + (control[2] - control[1]) * (2 * v * u) +
          (control[3] - control[2]) * (u * u)) *
         3.0;
}

double BezierCurve::arc_length(double u0, double u1, int samples) const {
  double len = 0.0;
  Vec2 prev = at(u0);
  for (int k = 1; k <= samples; ++k) {
    const Vec2 p = at(u0 + (u1 - u0) * k / samples);
    len += distance(prev, p);
    prev = p;
  }
  return len;
}

Vec2 OrientedRect::axis() const { return {std::cos(angle), std::sin(angle)}; }
Vec2 OrientedRect::normal() const { return {-std::sin(angle), std::cos(angle)}; }

std::array<Vec2, 4> OrientedRect::corners() const {
  const Vec2 a = axis() * (length / 2);
  const Vec2 n = normal() * (thickness / 2);
  return {center - a - n, center + a - n, center + a + n, center - a + n};
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> p(points.begin(), points.end());
  std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  std::vector<Vec2> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i - 1] - h[k - 2]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  return h;
}

OrientedRect min_area_rect(std::span<const Vec2> points) {
  const std::vector<Vec2> h = convex_hull(points);
  const std::size_t n = h.size();
  if (n < 3 || std::abs(polygon_signed_area(h)) < 1e-12) {
    throw GeometryError("min_area_rect needs at least 3 non-collinear points");
  }
  auto next = [n](std::size_t i) { return (i + 1) % n; };

  // Rotating calipers: for each hull edge keep the extreme vertices along the
  // edge direction (max, min) and along its inward normal (max).
  std::size_t j = 0, k = 0, m = 0;
  double best_area = std::numeric_limits<double>::infinity();
  OrientedRect best;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = normalized(h[next(i)] - h[i]);
    const Vec2 nl{-e.y, e.x};
    if (i == 0) {
      for (std::size_t q = 0; q < n; ++q) {
        if (dot(h[q], e) > dot(h[j], e)) j = q;
        if (dot(h[q], nl) > dot(h[k], nl)) k = q;
        if (dot(h[q], e) < dot(h[m], e)) m = q;
      }
    } else {
      while (dot(h[next(j)], e) > dot(h[j], e) + 1e-15) j = next(j);
      while (dot(h[next(k)], nl) > dot(h[k], nl) + 1e-15) k = next(k);
      while (dot(h[next(m)], e) < dot(h[m], e) - 1e-15) m = next(m);
    }
    const double e_lo = dot(h[m], e);
    const double e_hi = dot(h[j], e);
    const double n_lo = dot(h[i], nl);
    const double n_hi = dot(h[k], nl);
    const double area = (e_hi - e_lo) * (n_hi - n_lo);
    if (area < best_area) {
      best_area = area;
      const double w = e_hi - e_lo;
      const double t = n_hi - n_lo;
      best.center = e * ((e_lo + e_hi) / 2) + nl * ((n_lo + n_hi) / 2);
      if (w >= t) {
        best.length = w;
        best.thickness = t;
        best.angle = normalize_half_turn(std::atan2(e.y, e.x));
      } else {
        best.length = t;
        best.thickness = w;
        best.angle = normalize_half_turn(std::atan2(nl.y, nl.x));
      }
    }
  }
  return best;
}

BezierCurve fit_cubic(std::span<const Vec2> points) {
  if (points.size() < 2) throw GeometryError("cubic fit needs at least 2 points");
  BezierCurve c;
  c.control[0] = points.front();
  c.control[3] = points.back();
  c.control[1] = lerp(c.control[0], c.control[3], 1.0 / 3.0);
  c.control[2] = lerp(c.control[0], c.control[3], 2.0 / 3.0);
  if (points.size() < 4) return c;

  std::vector<double> t(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) t[i] = t[i - 1] + distance(points[i - 1], points[i]);
  if (t.back() <= 0) throw GeometryError("cubic fit over coincident points");
  for (double& v : t) v /= t.back();

  double a11 = 0, a12 = 0, a22 = 0;
  Vec2 r1, r2;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double u = t[i];
    const double v = 1.0 - u;
    const double b0 = v * v * v, b1 = 3 * v * v * u, b2 = 3 * v * u * u, b3 = u * u * u;
    const Vec2 r = points[i] - c.control[0] * b0 - c.control[3] * b3;
    a11 += b1 * b1;
    a12 += b1 * b2;
    a22 += b2 * b2;
    r1 += r * b1;
    r2 += r * b2;
  }
  const double det = a11 * a22 - a12 * a12;
  if (std::abs(det) < 1e-12) return c;
  c.control[1] = (r1 * a22 - r2 * a12) / det;
  c.control[2] = (r2 * a11 - r1 * a12) / det;
  return c;
}

std::pair<BezierCurve, BezierCurve> fit_boundary_beziers(const PolygonMask& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  const OrientedRect rect = min_area_rect(v);
  const Vec2 d = rect.axis();
  const Vec2 nrm = rect.normal();

  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (dot(v[i], d) < dot(v[lo], d) - 1e-9) lo = i;
    if (dot(v[i], d) > dot(v[hi], d) + 1e-9) hi = i;
  }
  if (lo == hi) throw GeometryError("polygon has no extent along its dominant direction");

  // Both chains run from the low extreme to the high extreme.
  std::vector<Vec2> a, b;
  for (std::size_t i = lo;; i = (i + 1) % n) {
    a.push_back(v[i]);
    if (i == hi) break;
  }
  for (std::size_t i = hi;; i = (i + 1) % n) {
    b.push_back(v[i]);
    if (i == lo) break;
  }
  std::reverse(b.begin(), b.end());

  // Drop an end cap edge when the chain turns sharply right after it.
  const double cap_turn = kPi / 3;
  for (auto* chain : {&a, &b}) {
    auto& c = *chain;
    if (c.size() >= 3 && turn_angle(c[0], c[1], c[2]) > cap_turn) c.erase(c.begin());
    const std::size_t m = c.size();
    if (m >= 3 && turn_angle(c[m - 3], c[m - 2], c[m - 1]) > cap_turn) c.pop_back();
  }
  if (a.size() < 2 || b.size() < 2) throw GeometryError("boundary chain has fewer than 2 points");

  auto mean_offset = [&](const std::vector<Vec2>& c) {
    double s = 0.0;
    for (const Vec2& p : c) s += dot(p, nrm);
    return s / c.size();
  };
  const int samples = 32;
  BezierCurve ca = fit_cubic(resample_polyline(a, samples));
  BezierCurve cb = fit_cubic(resample_polyline(b, samples));
  if (mean_offset(a) <= mean_offset(b)) return {ca, cb};
  return {cb, ca};
}

BezierCurve baseline(const BezierCurve& upper, const BezierCurve& lower) {
  BezierCurve c;
  for (int i = 0; i < 4; ++i) c.control[i] = (upper.control[i] + lower.control[i]) * 0.5;
  return c;
}

std::vector<double> split_points(const BezierCurve& base, const OrientedRect& rect) {
  const int samples = 1000;
  std::vector<double> candidates;
  for (const Vec2 axis : {rect.axis(), rect.normal()}) {
    auto f = [&](double u) { return cross(unit_tangent(base, u), axis); };
    double u_prev = 1.0 / samples;
    double f_prev = f(u_prev);
    for (int k = 2; k < samples; ++k) {
      const double u = static_cast<double>(k) / samples;
      const double fu = f(u);
      const bool live = std::abs(f_prev) > 1e-12 || std::abs(fu) > 1e-12;
      if (live && f_prev * fu <= 0) {
        double a = u_prev, b = u, fa = f_prev;
        while (b - a >= 1e-6) {
          const double mid = 0.5 * (a + b);
          const double fm = f(mid);
          if ((fm <= 0) == (fa <= 0) && fm != 0) {
            a = mid;
            fa = fm;
          } else {
            b = mid;
          }
        }
        candidates.push_back(0.5 * (a + b));
      }
      u_prev = u;
      f_prev = fu;
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> unique;
  for (double u : candidates) {
    if (unique.empty() || u - unique.back() > 1e-4) unique.push_back(u);
  }

  const double min_turn = kSplitFilterDegrees * kPi / 180.0;
  std::vector<double> kept;
  Vec2 entry = unit_tangent(base, 0.0);
  for (double u : unique) {
    const Vec2 t = unit_tangent(base, u);
    if (std::acos(std::clamp(dot(t, entry), -1.0, 1.0)) > min_turn) {
      kept.push_back(u);
      entry = t;
    }
  }
  return kept;
}

double chord_deviation(const BezierCurve& base, double u0, double u1) {
  const Vec2 a = base.at(u0);
  const Vec2 b = base.at(u1);
  const double len = distance(a, b);
  if (len < 1e-12) return std::numeric_limits<double>::infinity();
  const Vec2 d = (b - a) / len;
  double worst = 0.0;
  const int samples = 64;
  for (int k = 1; k < samples; ++k) {
    const Vec2 p = base.at(u0 + (u1 - u0) * k / samples);
    worst = std::max(worst, std::abs(cross(d, p - a)));
  }
  return worst / len;
}

namespace {

constexpr double kRefineChordDeviation = 0.08;
constexpr double kMergeChordDeviation = 0.1;

Quad band_quad(const BezierCurve& upper, const BezierCurve& lower, const BezierCurve& base,
               double u0, double u1) {
  const Vec2 pa = base.at(u0);
  const Vec2 d = normalized(base.at(u1) - pa);
  const Vec2 n{-d.y, d.x};
  double s_lo = 0, s_hi = 0, t_lo = 0, t_hi = 0;
  bool first = true;
  const int samples = 32;
  for (int k = 0; k <= samples; ++k) {
    const double u = u0 + (u1 - u0) * k / samples;
    for (const Vec2 q : {upper.at(u), lower.at(u)}) {
      const double s = dot(q - pa, d);
      const double t = dot(q - pa, n);
      if (first) {
        s_lo = s_hi = s;
        t_lo = t_hi = t;
        first = false;
      }
      s_lo = std::min(s_lo, s);
      s_hi = std::max(s_hi, s);
      t_lo = std::min(t_lo, t);
      t_hi = std::max(t_hi, t);
    }
  }
  auto corner = [&](double s, double t) { return pa + d * s + n * t; };
  return Quad{{corner(s_lo, t_lo), corner(s_hi, t_lo), corner(s_hi, t_hi), corner(s_lo, t_hi)}};
}

}  // namespace

Decomposition decompose_mask(const PolygonMask& poly, std::string_view text) {
  if (text.empty()) throw InputError("cannot divide a mask for empty text");
  Decomposition dec;
  std::tie(dec.upper, dec.lower) = fit_boundary_beziers(poly);
  dec.base = baseline(dec.upper, dec.lower);
  dec.rect = min_area_rect(poly);
  dec.split_u = split_points(dec.base, dec.rect);

  std::vector<double> bounds{0.0};
  bounds.insert(bounds.end(), dec.split_u.begin(), dec.split_u.end());
  bounds.push_back(1.0);

  // Bisect pieces whose chord strays too far from the curve.
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<double> refined{bounds.front()};
    bool changed = false;
    for (std::size_t i = 1; i < bounds.size(); ++i) {
      if (chord_deviation(dec.base, bounds[i - 1], bounds[i]) > kRefineChordDeviation) {
        refined.push_back(0.5 * (bounds[i - 1] + bounds[i]));
        changed = true;
      }
      refined.push_back(bounds[i]);
    }
    bounds = std::move(refined);
    if (!changed) break;
  }

  auto piece_length = [&](std::size_t i) { return dec.base.arc_length(bounds[i], bounds[i + 1], 64); };
  const double total = dec.base.arc_length(0.0, 1.0, 512);
  const double char_width = total / static_cast<double>(text.size());

  // Fold slivers shorter than one character into a neighbor when the merged
  // piece stays straight enough.
  for (;;) {
    const std::size_t pieces = bounds.size() - 1;
    if (pieces < 2) break;
    std::vector<std::size_t> order(pieces);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> len(pieces);
    for (std::size_t i = 0; i < pieces; ++i) len[i] = piece_length(i);
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return len[x] < len[y]; });
    bool merged = false;
    for (std::size_t i : order) {
      if (len[i] >= char_width) break;
      std::vector<std::size_t> nbrs;
      if (i > 0) nbrs.push_back(i - 1);
      if (i + 1 < pieces) nbrs.push_back(i + 1);
      std::sort(nbrs.begin(), nbrs.end(), [&](auto x, auto y) { return len[x] < len[y]; });
      for (std::size_t j : nbrs) {
        const std::size_t left = std::min(i, j);
        if (chord_deviation(dec.base, bounds[left], bounds[left + 2]) < kMergeChordDeviation) {
          bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(left) + 1);
          merged = true;
          break;
        }
      }
      if (merged) break;
    }
    if (!merged) break;
  }

  // Every piece must carry at least one character.
  while (bounds.size() - 1 > text.size()) {
    std::size_t best = 0;
    double best_len = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 2 < bounds.size(); ++i) {
      const double l = piece_length(i) + piece_length(i + 1);
      if (l < best_len) {
        best_len = l;
        best = i;
      }
    }
    bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  dec.boundaries = bounds;

  const std::size_t pieces = bounds.size() - 1;
  std::vector<double> len(pieces);
  double len_sum = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) len_sum += len[i] = piece_length(i);
  std::vector<int> count(pieces, 1);
  const int spare = static_cast<int>(text.size() - pieces);
  std::vector<double> frac(pieces);
  int given = 0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double q = spare * len[i] / len_sum;
    const int whole = static_cast<int>(std::floor(q));
    count[i] += whole;
    given += whole;
    frac[i] = q - whole;
  }
  std::vector<std::size_t> order(pieces);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return frac[x] > frac[y]; });
  for (int r = 0; r < spare - given; ++r) ++count[order[r % pieces]];

  int cursor = 0;
  for (std::size_t i = 0; i < pieces; ++i) {
    QuadSegment seg;
    seg.quad = band_quad(dec.upper, dec.lower, dec.base, bounds[i], bounds[i + 1]);
    const Vec2 d = dec.base.at(bounds[i + 1]) - dec.base.at(bounds[i]);
    seg.angle = std::atan2(d.y, d.x);
    seg.index = static_cast<int>(i);
    seg.text_slice = {cursor, cursor + count[i]};
    cursor += count[i];
    dec.segments.push_back(seg);
  }
  return dec;
}

std::vector<QuadSegment> divide_mask(const PolygonMask& poly, std::string_view text) {
  return decompose_mask(poly, text).segments;
}

QuadSegment segment_from_quad(const Quad& quad, int index, TextSlice slice) {
  const Vec2 d = quad.corners[1] - quad.corners[0];
  return QuadSegment{quad, std::atan2(d.y, d.x), index, slice};
}

std::vector<QuadSegment> flat_segments(const FlatLayout& layout) {
  std::vector<QuadSegment> out;
  for (std::size_t i = 0; i < layout.rects.size(); ++i) {
    out.push_back(segment_from_quad(layout.rects[i].quad(), static_cast<int>(i), layout.slices[i]));
  }
  return out;
}

FlatLayout flatten_segments(std::span<const QuadSegment> segments, int canvas_height,
                            int canvas_width) {
  FlatLayout layout;
  layout.canvas_height = canvas_height;
  layout.canvas_width = canvas_width;
  if (segments.empty()) return layout;

  double common = 0.0;
  for (const auto& s : segments) {
    if (!(s.quad.area() > 1e-12)) throw GeometryError("segment quad has zero area");
    common += s.height();
  }
  common /= static_cast<double>(segments.size());

  std::vector<double> widths;
  for (const auto& s : segments) widths.push_back(s.length() * common / s.height());

  const double g = kFlatGutter;
  constexpr double slack = 1e-6;
  const double row_h = std::ceil(common - slack);
  auto pack = [&](double canvas_w, std::vector<Vec2>* origins) {
    double x = g, y = g;
    for (double w : widths) {
      if (x > g && x + w > canvas_w - g + slack) {
        x = g;
        y += row_h + g;
      }
      if (origins) origins->push_back({x, y});
      x = std::ceil(x + w + g - slack);
    }
    return y + row_h + g;
  };

  const double widest = *std::max_element(widths.begin(), widths.end());
  std::vector<Vec2> origins;
  const double need_h = pack(canvas_width, &origins);
  if (widest + 2 * g > canvas_width + slack || need_h > canvas_height + slack) {
    const double req_w = std::max<double>(canvas_width, std::ceil(widest + 2 * g - slack));
    const double req_h = std::max<double>(canvas_height, std::ceil(pack(req_w, nullptr) - slack));
    char need[64];
    std::snprintf(need, sizeof need, "%.0fx%.0f", req_h, req_w);
    throw LayoutError("flat layout needs a canvas of at least " + std::string(need) + ", got " +
                      std::to_string(canvas_height) + "x" + std::to_string(canvas_width));
  }

  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    FlatRect r{origins[i].x, origins[i].y, widths[i], common};
    RigidTransform t;
    t.angle = s.angle;
    t.scale = s.height() / common;
    t.translation = s.quad.corners[0] - rotated({r.x, r.y}, t.angle) * t.scale;
    layout.rects.push_back(r);
    layout.transforms.push_back(t);
    layout.slices.push_back(s.text_slice);
  }
  return layout;
}

namespace {

template <class Inside>
RegionMask rasterize(int height, int width, int downscale, Inside inside) {
  if (downscale <= 0 || height % downscale != 0 || width % downscale != 0) {
    throw ShapeError("rasterize: downscale " + std::to_string(downscale) + " does not divide " +
                     std::to_string(height) + "x" + std::to_string(width));
  }
  const int h = height / downscale;
  const int w = width / downscale;
  RegionMask m(1, h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (inside(Vec2{(x + 0.5) * downscale, (y + 0.5) * downscale})) m.at(0, y, x) = 1.0;
    }
  }
  return m;
}

}  // namespace

RegionMask rasterize_mask(std::span<const PolygonMask> polys, int height, int width, int downscale) {
  return rasterize(height, width, downscale, [&](Vec2 p) {
    return std::any_of(polys.begin(), polys.end(), [&](const PolygonMask& q) { return q.contains(p); });
  });
}

RegionMask rasterize_quads(std::span<const Quad> quads, int height, int width, int downscale) {
  return rasterize(height, width, downscale, [&](Vec2 p) {
    return std::any_of(quads.begin(), quads.end(), [&](const Quad& q) { return q.contains(p); });
  });
}

}  // namespace glyphguide
