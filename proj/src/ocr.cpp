#include <array>
#include <cmath>

#include "glyphguide/bench.hpp"

namespace glyphguide {

namespace {

constexpr int kCells = kGlyphCols * kGlyphRows;
constexpr int kSuper = 3;

template <class Tag>
double gray_at(const PlanarGrid<Tag>& img, Vec2 p) {
  double s = 0.0;
  for (int c = 0; c < img.channels(); ++c) s += sample_at(img, c, p, Interp::bilinear);
  return s / img.channels();
}

// Zero-mean, unit-norm copy; false when the vector is flat.
bool standardize(std::array<double, kCells>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= kCells;
  double ss = 0.0;
  for (double& x : v) {
    x -= mean;
    ss += x * x;
  }
  if (ss < 1e-18) return false;
  const double inv = 1.0 / std::sqrt(ss);
  for (double& x : v) x *= inv;
  return true;
}

template <class Tag>
OcrResult decode_impl(const PlanarGrid<Tag>& img, std::span<const Quad> cells, const BitmapFont& font) {
  const std::string& chars = font.inked_charset();
  std::vector<std::array<double, kCells>> templates;
  for (char ch : chars) {
    std::array<double, kCells> t{};
    const GlyphBitmap& g = font.glyph(ch);
    for (int y = 0; y < kGlyphRows; ++y) {
      for (int x = 0; x < kGlyphCols; ++x) t[y * kGlyphCols + x] = g.ink(x, y) ? 1.0 : 0.0;
    }
    standardize(t);
    templates.push_back(t);
  }

  OcrResult out;
  for (const Quad& q : cells) {
    const double w = q.top_length();
    const double h = q.left_length();
    const LineMetrics m = line_metrics(w, h, 1);
    std::array<double, kCells> patch{};
    for (int gy = 0; gy < kGlyphRows; ++gy) {
      for (int gx = 0; gx < kGlyphCols; ++gx) {
        double acc = 0.0;
        for (int j = 0; j < kSuper; ++j) {
          for (int i = 0; i < kSuper; ++i) {
            const double u = m.x_offset + (gx + (i + 0.5) / kSuper) * m.scale;
            const double v = m.y_offset + (gy + (j + 0.5) / kSuper) * m.scale;
            acc += gray_at(img, q.point_at(u / w, v / h));
          }
        }
        patch[gy * kGlyphCols + gx] = acc / (kSuper * kSuper);
      }
    }
    if (!standardize(patch)) {
      out.decoded += kUnknownChar;
      out.confidences.push_back(0.0);
      continue;
    }
    double best = -2.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < templates.size(); ++k) {
      double s = 0.0;
      for (int i = 0; i < kCells; ++i) s += patch[i] * templates[k][i];
      if (s > best) {
        best = s;
        arg = k;
      }
    }
    out.decoded += best < kOcrThreshold ? kUnknownChar : chars[arg];
    out.confidences.push_back(best);
  }
  return out;
}

}  // namespace

OcrResult ocr_decode(const Image& img, std::span<const Quad> cells, const BitmapFont& font) {
  return decode_impl(img, cells, font);
}

OcrResult ocr_decode(const GlyphImage& img, std::span<const Quad> cells, const BitmapFont& font) {
  return decode_impl(img, cells, font);
}

}  // namespace glyphguide
