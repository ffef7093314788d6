#include "glyphguide/glyph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glyphguide {

LineMetrics line_metrics(double width, double height, int n_chars) {
  LineMetrics m;
  if (n_chars <= 0) return m;
  m.cell_width = width / n_chars;
  const double fit = std::min(0.8 * height / kGlyphRows, m.cell_width / (kGlyphCols + 1));
  m.scale = std::max(1, static_cast<int>(std::floor(fit + 1e-9)));
  m.x_offset = (m.cell_width - kGlyphCols * m.scale) / 2.0;
  m.y_offset = (height - kGlyphRows * m.scale) / 2.0;
  return m;
}

void draw_text(GlyphImage& img, const FlatRect& rect, std::string_view text, const BitmapFont& font) {
  const std::string upper = normalize_text(text, font);
  const int n = static_cast<int>(upper.size());
  if (n == 0) return;
  const LineMetrics m = line_metrics(rect.width, rect.height, n);
  const int oy = static_cast<int>(std::floor(rect.y + m.y_offset + 0.5));
  for (int k = 0; k < n; ++k) {
    const GlyphBitmap& g = font.glyph(upper[k]);
    const int ox = static_cast<int>(std::floor(rect.x + k * m.cell_width + m.x_offset + 0.5));
    for (int gy = 0; gy < kGlyphRows; ++gy) {
      for (int gx = 0; gx < kGlyphCols; ++gx) {
        if (!g.ink(gx, gy)) continue;
        for (int j = 0; j < m.scale; ++j) {
          const int y = oy + gy * m.scale + j;
          if (y < 0 || y >= img.height()) continue;
          for (int i = 0; i < m.scale; ++i) {
            const int x = ox + gx * m.scale + i;
            if (x >= 0 && x < img.width()) img.at(0, y, x) = 1.0;
          }
        }
      }
    }
  }
}

namespace {

void apply_polarity(GlyphImage& img, Polarity polarity) {
  if (polarity == Polarity::black_on_ink) {
    for (double& v : img.values()) v = 1.0 - v;
  }
}

std::string_view slice_of(std::string_view text, TextSlice s) {
  if (s.begin < 0 || s.end < s.begin || static_cast<std::size_t>(s.end) > text.size()) {
    throw InputError("text slice [" + std::to_string(s.begin) + "," + std::to_string(s.end) +
                     ") is outside text of length " + std::to_string(text.size()));
  }
  return text.substr(s.begin, s.size());
}

bool is_axis_aligned_rect(const Quad& q) {
  const auto& c = q.corners;
  return c[0].y == c[1].y && c[2].y == c[3].y && c[0].x == c[3].x && c[1].x == c[2].x &&
         c[1].x > c[0].x && c[3].y > c[0].y;
}

}  // namespace

GlyphImage render_flat_glyph(const FlatLayout& layout, std::string_view text, int height, int width,
                             Polarity polarity) {
  const std::string upper = normalize_text(text);
  GlyphImage img(1, height, width);
  for (std::size_t i = 0; i < layout.rects.size() && !upper.empty(); ++i) {
    draw_text(img, layout.rects[i], slice_of(upper, layout.slices[i]));
  }
  apply_polarity(img, polarity);
  return img;
}

GlyphImage render_glyph_image(std::span<const QuadSegment> segments, std::string_view text,
                              int height, int width, Polarity polarity) {
  const std::string upper = normalize_text(text);
  GlyphImage img(1, height, width);
  for (const QuadSegment& seg : segments) {
    if (upper.empty()) break;
    const std::string_view sub = slice_of(upper, seg.text_slice);
    const Quad& q = seg.quad;
    if (!(q.area() > 1e-12)) throw GeometryError("segment quad has zero area");
    if (is_axis_aligned_rect(q)) {
      const auto& c = q.corners;
      draw_text(img, FlatRect{c[0].x, c[0].y, c[1].x - c[0].x, c[3].y - c[0].y}, sub);
      continue;
    }
    const double len = seg.length();
    const double h = seg.height();
    GlyphImage local(1, static_cast<int>(std::ceil(h)) + 1, static_cast<int>(std::ceil(len)) + 1);
    draw_text(local, FlatRect{0.0, 0.0, len, h}, sub);

    double minx = q.corners[0].x, maxx = minx, miny = q.corners[0].y, maxy = miny;
    for (const Vec2& p : q.corners) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    const int y0 = std::max(0, static_cast<int>(std::floor(miny)));
    const int y1 = std::min(height, static_cast<int>(std::ceil(maxy)) + 1);
    const int x0 = std::max(0, static_cast<int>(std::floor(minx)));
    const int x1 = std::min(width, static_cast<int>(std::ceil(maxx)) + 1);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const auto uv = q.local_coords({x + 0.5, y + 0.5});
        if (!uv || uv->x < 0.0 || uv->x > 1.0 || uv->y < 0.0 || uv->y > 1.0) continue;
        const double v = sample_at(local, 0, Vec2{uv->x * len, uv->y * h}, Interp::bilinear);
        double& dst = img.at(0, y, x);
        dst = std::max(dst, v);
      }
    }
  }
  apply_polarity(img, polarity);
  return img;
}

std::vector<Quad> char_cells(std::span<const QuadSegment> segments, std::string_view text) {
  std::vector<Quad> cells;
  for (const QuadSegment& seg : segments) {
    const int n = slice_of(text, seg.text_slice).size();
    for (int k = 0; k < n; ++k) {
      const double a = static_cast<double>(k) / n;
      const double b = static_cast<double>(k + 1) / n;
      const Quad& q = seg.quad;
      cells.push_back(Quad{{q.point_at(a, 0.0), q.point_at(b, 0.0), q.point_at(b, 1.0), q.point_at(a, 1.0)}});
    }
  }
  return cells;
}

}  // namespace glyphguide
