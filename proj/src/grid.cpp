#include "glyphguide/grid.hpp"

#include <algorithm>
#include <cmath>

namespace glyphguide {

std::optional<Vec2> Quad::local_coords(Vec2 p) const {
  const auto& c = corners;
  // Affine start from the upper-left frame.
  const Vec2 e1 = c[1] - c[0];
  const Vec2 e2 = c[3] - c[0];
  const double det0 = cross(e1, e2);
  if (std::abs(det0) < 1e-14) return std::nullopt;
  const Vec2 d = p - c[0];
  double u = cross(d, e2) / det0;
  double v = cross(e1, d) / det0;
  for (int iter = 0; iter < 30; ++iter) {
    const Vec2 r = point_at(u, v) - p;
    if (std::abs(r.x) < 1e-13 && std::abs(r.y) < 1e-13) return Vec2{u, v};
    const Vec2 du = (c[1] - c[0]) * (1.0 - v) + (c[2] - c[3]) * v;
    const Vec2 dv = (c[3] - c[0]) * (1.0 - u) + (c[2] - c[1]) * u;
    const double det = cross(du, dv);
    if (std::abs(det) < 1e-14) return std::nullopt;
    u -= cross(r, dv) / det;
    v -= cross(du, r) / det;
  }
  const Vec2 r = point_at(u, v) - p;
  if (norm(r) < 1e-9) return Vec2{u, v};
  return std::nullopt;
}

double Quad::signed_area() const {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) a += cross(corners[i], corners[(i + 1) % 4]);
  return 0.5 * a;
}

bool Quad::contains(Vec2 p) const {
  bool inside = false;
  for (int i = 0, j = 3; i < 4; j = i++) {
    const Vec2 a = corners[i];
    const Vec2 b = corners[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double xc = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < xc) inside = !inside;
    }
  }
  return inside;
}

bool Quad::is_convex() const {
  int sign = 0;
  for (int i = 0; i < 4; ++i) {
    const double z = cross(corners[(i + 1) % 4] - corners[i], corners[(i + 2) % 4] - corners[(i + 1) % 4]);
    if (std::abs(z) < 1e-12) continue;
    const int s = z > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return sign != 0;
}

RegionMask make_mask(int height, int width, std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ShapeError("mask values must lie in [0,1]");
  }
  return RegionMask(1, height, width, std::move(values));
}

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ChannelStats channel_stats(const LatentGrid& g) {
  if (g.empty()) throw ShapeError("channel_stats of an empty grid");
  ChannelStats s;
  const double n = static_cast<double>(g.plane_size());
  for (int c = 0; c < g.channels(); ++c) {
    const auto p = g.plane(c);
    double sum = 0.0;
    for (double v : p) sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : p) sq += (v - mean) * (v - mean);
    s.mean.push_back(mean);
    s.std.push_back(std::sqrt(sq / n));
  }
  return s;
}

LatentGrid adain(const LatentGrid& content, const LatentGrid& style, double std_floor) {
  if (content.channels() != style.channels()) {
    throw ShapeError("adain channel mismatch: " + content.shape_string() + " vs " +
                     style.shape_string());
  }
  const ChannelStats cs = channel_stats(content);
  const ChannelStats ss = channel_stats(style);
  LatentGrid out = content;
  for (int c = 0; c < content.channels(); ++c) {
    const double gain = ss.std[c] / std::max(cs.std[c], std_floor);
    for (double& v : out.plane(c)) v = gain * (v - cs.mean[c]) + ss.mean[c];
  }
  return out;
}

LatentGrid masked_blend(const LatentGrid& a, const LatentGrid& b, const RegionMask& m) {
  if (!a.same_shape(b) || m.height() != a.height() || m.width() != a.width()) {
    throw ShapeError("masked_blend shape mismatch: " + a.shape_string() + ", " +
                     b.shape_string() + ", mask " + m.shape_string());
  }
  LatentGrid out = b;
  const auto mv = m.plane(0);
  for (int c = 0; c < a.channels(); ++c) {
    const auto pa = a.plane(c);
    const auto pb = b.plane(c);
    auto po = out.plane(c);
    for (std::size_t i = 0; i < po.size(); ++i) po[i] = pa[i] * mv[i] + pb[i] * (1.0 - mv[i]);
  }
  return out;
}

LatentGrid rotate_resample(const LatentGrid& g, double angle, Vec2 center, Interp mode) {
  if (angle == 0.0) return g;
  LatentGrid out(g.channels(), g.height(), g.width());
  const double co = std::cos(angle);
  const double si = std::sin(angle);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const Vec2 d = Vec2{x + 0.5, y + 0.5} - center;
      const Vec2 src{co * d.x + si * d.y + center.x, -si * d.x + co * d.y + center.y};
      for (int c = 0; c < g.channels(); ++c) out.at(c, y, x) = sample_at(g, c, src, mode);
    }
  }
  return out;
}

namespace {

void require_area(const Quad& quad) {
  if (!(quad.area() > 1e-12)) throw GeometryError("degenerate quad with zero area");
}

struct CellRange {
  int y0, y1, x0, x1;
};

CellRange cell_range(const Quad& quad, int height, int width) {
  double minx = quad.corners[0].x, maxx = minx, miny = quad.corners[0].y, maxy = miny;
  for (const Vec2& p : quad.corners) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  auto clampi = [](double v, int lo, int hi) {
    return static_cast<int>(std::clamp(v, static_cast<double>(lo), static_cast<double>(hi)));
  };
  return {clampi(std::floor(miny) - 1, 0, height), clampi(std::ceil(maxy) + 1, 0, height),
          clampi(std::floor(minx) - 1, 0, width), clampi(std::ceil(maxx) + 1, 0, width)};
}

}  // namespace

LatentGrid extract_region(const LatentGrid& g, const Quad& quad, int out_h, int out_w,
                          Interp mode) {
  require_area(quad);
  if (out_h <= 0 || out_w <= 0) throw ShapeError("extract_region needs a positive output size");
  LatentGrid out(g.channels(), out_h, out_w);
  for (int i = 0; i < out_h; ++i) {
    for (int j = 0; j < out_w; ++j) {
      const Vec2 p = quad.point_at((j + 0.5) / out_w, (i + 0.5) / out_h);
      for (int c = 0; c < g.channels(); ++c) out.at(c, i, j) = sample_at(g, c, p, mode);
    }
  }
  return out;
}

LatentGrid paste_region(const LatentGrid& dst, const LatentGrid& src, const Quad& quad,
                        Interp mode) {
  require_area(quad);
  if (dst.channels() != src.channels()) {
    throw ShapeError("paste_region channel mismatch: " + dst.shape_string() + " vs " +
                     src.shape_string());
  }
  LatentGrid out = dst;
  const CellRange r = cell_range(quad, dst.height(), dst.width());
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      const Vec2 p{x + 0.5, y + 0.5};
      if (!quad.contains(p)) continue;
      const auto uv = quad.local_coords(p);
      if (!uv) throw GeometryError("paste_region could not invert the quad map");
      // The cell is inside the quad, so clamp round-off onto the source's edge cells.
      const double lo = mode == Interp::bilinear ? 0.5 : 0.0;
      const double sx = std::clamp(uv->x * src.width(), lo, src.width() - lo - 1e-9);
      const double sy = std::clamp(uv->y * src.height(), lo, src.height() - lo - 1e-9);
      const Vec2 s{sx, sy};
      for (int c = 0; c < dst.channels(); ++c) out.at(c, y, x) = sample_at(src, c, s, mode);
    }
  }
  return out;
}

RegionMask quad_footprint(const Quad& quad, int height, int width) {
  RegionMask m(1, height, width);
  if (quad.area() <= 1e-12) return m;
  const CellRange r = cell_range(quad, height, width);
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      if (quad.contains({x + 0.5, y + 0.5})) m.at(0, y, x) = 1.0;
    }
  }
  return m;
}

}  // namespace glyphguide
