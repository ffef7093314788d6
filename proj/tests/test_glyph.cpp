#include "doctest.h"
#include "geometry_oracles.hpp"
#include "glyphguide/bench.hpp"
#include "glyphguide/font.hpp"
#include "glyphguide/glyph.hpp"

#include <numbers>

using namespace glyphguide;

TEST_SUITE("glyph") {

TEST_CASE("font table") {
  const BitmapFont& f = BitmapFont::standard();
  CHECK(f.charset().size() == 37);
  CHECK(f.inked_charset().size() == 36);
  CHECK(f.glyph('A').ink_count() == 18);
  CHECK(f.glyph('B').ink_count() == 20);
  CHECK(f.glyph(' ').ink_count() == 0);
  // 'I' is a centered vertical bar with serifs: 3 + 5 * 1 + 3
  CHECK(f.glyph('I').ink_count() == 11);
  CHECK(f.glyph('A').ink(2, 0));
  CHECK_FALSE(f.glyph('A').ink(0, 0));
  // every inked glyph is distinct
  for (char a : f.inked_charset())
    for (char b : f.inked_charset())
      if (a != b) CHECK(f.glyph(a).rows != f.glyph(b).rows);
}

TEST_CASE("normalize_text upper-cases and names bad characters") {
  CHECK(normalize_text("Hello 42") == "HELLO 42");
  try {
    (void)normalize_text("ok!?");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find('!') != std::string::npos);
    CHECK(msg.find('?') != std::string::npos);
  }
}

TEST_CASE("line metrics for a five-slot row") {
  const LineMetrics m = line_metrics(120, 36, 5);
  CHECK(m.cell_width == 24.0);
  CHECK(m.scale == 4);  // min(0.8 * 36 / 7, 24 / 6) = 4
  CHECK(m.x_offset == 2.0);
  CHECK(m.y_offset == 4.0);
  CHECK(line_metrics(3, 3, 2).scale == 1);
}

TEST_CASE("draw_text inks exactly the glyph pixels") {
  GlyphImage img(1, 20, 20, 0.0);
  draw_text(img, FlatRect{0, 0, 12, 20}, "A");
  const LineMetrics m = line_metrics(12, 20, 1);
  double ink = 0.0;
  for (double v : img.values()) ink += v;
  CHECK(ink == 18.0 * m.scale * m.scale);
}

TEST_CASE("an axis-aligned segment renders like the flat layout") {
  const auto segs = divide_mask(rect_polygon(10, 20, 100, 30), "GLYPH");
  const FlatLayout flat = flatten_segments(segs, 128, 128);
  const GlyphImage curved = render_glyph_image(segs, "GLYPH", 128, 128);
  GlyphImage direct(1, 128, 128, 0.0);
  draw_text(direct, FlatRect{10, 20, 100, 30}, "GLYPH");
  CHECK(curved == direct);
  CHECK(render_flat_glyph(flat, "GLYPH", 128, 128).height() == 128);
}

TEST_CASE("flat glyph examples") {
  const auto segs = divide_mask(rect_polygon(10, 20, 40, 42), "A");
  const FlatLayout flat = flatten_segments(segs, 128, 128);
  const GlyphImage blank_flat = render_flat_glyph(flat, "", 128, 128);
  const GlyphImage blank_posed = render_glyph_image(segs, "", 128, 128);
  for (double v : blank_flat.values()) CHECK(v == 0.0);
  for (double v : blank_posed.values()) CHECK(v == 0.0);

  const GlyphImage img = render_flat_glyph(flat, "A", 128, 128);
  const FlatRect& r = flat.rects[0];
  const LineMetrics m = line_metrics(r.width, r.height, 1);
  const int ox = static_cast<int>(std::floor(r.x + m.x_offset + 0.5));
  const int oy = static_cast<int>(std::floor(r.y + m.y_offset + 0.5));
  const GlyphBitmap& a = BitmapFont::standard().glyph('A');
  double ink = 0.0;
  for (int y = 0; y < 128; ++y)
    for (int x = 0; x < 128; ++x) {
      const int gx = x - ox, gy = y - oy;
      const bool inside = gx >= 0 && gy >= 0 && gx < kGlyphCols * m.scale && gy < kGlyphRows * m.scale;
      const double want = inside && a.ink(gx / m.scale, gy / m.scale) ? 1.0 : 0.0;
      CHECK(img.at(0, y, x) == want);
      ink += img.at(0, y, x);
    }
  CHECK(ink == 18.0 * m.scale * m.scale);

  const auto two = divide_mask(rect_polygon(4, 4, 100, 40), "AB");
  const FlatLayout f2 = flatten_segments(two, 128, 128);
  const int s = line_metrics(f2.rects[0].width, f2.rects[0].height, 2).scale;
  double ink2 = 0.0;
  const GlyphImage ab = render_flat_glyph(f2, "AB", 128, 128);
  for (double v : ab.values()) ink2 += v;
  CHECK(ink2 == s * s * 38.0);
}

TEST_CASE("rotated renders keep their ink mass") {
  const std::string text = "MASS";
  const GlyphImage level =
      render_glyph_image(divide_mask(testing::rotated_rect(64, 64, 96, 30, 0.0), text), text, 128, 128);
  const GlyphImage turned = render_glyph_image(
      divide_mask(testing::rotated_rect(64, 64, 96, 30, 30.0 * std::numbers::pi / 180.0), text), text, 128, 128);
  double a = 0.0, b = 0.0;
  for (double v : level.values()) a += v;
  for (double v : turned.values()) b += v;
  CHECK(std::abs(b - a) < 0.05 * a);
}

TEST_CASE("disjoint segments composite by maximum") {
  const Quad q1 = FlatRect{4, 8, 56, 24}.quad();
  const PolygonMask p2 = testing::rotated_rect(80, 90, 60, 24, 0.5);
  const Quad q2{{p2.vertices()[0], p2.vertices()[1], p2.vertices()[2], p2.vertices()[3]}};
  const std::vector<QuadSegment> both{segment_from_quad(q1, 0, {0, 2}), segment_from_quad(q2, 1, {2, 4})};
  const std::vector<QuadSegment> first{segment_from_quad(q1, 0, {0, 2})};
  const std::vector<QuadSegment> second{segment_from_quad(q2, 0, {0, 2})};
  const GlyphImage all = render_glyph_image(both, "ABCD", 128, 128);
  const GlyphImage one = render_glyph_image(first, "AB", 128, 128);
  const GlyphImage two = render_glyph_image(second, "CD", 128, 128);
  for (std::size_t i = 0; i < all.size(); ++i)
    CHECK(all.values()[i] == std::max(one.values()[i], two.values()[i]));
}

TEST_CASE("polarity inverts the raster") {
  const auto segs = divide_mask(rect_polygon(10, 20, 100, 30), "AB");
  const GlyphImage a = render_glyph_image(segs, "AB", 64, 128, Polarity::ink_on_black);
  const GlyphImage b = render_glyph_image(segs, "AB", 64, 128, Polarity::black_on_ink);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values()[i] + b.values()[i] == doctest::Approx(1.0));
}

TEST_CASE("char cells tile each segment") {
  const auto segs = divide_mask(testing::arc_mask(), "CURVED");
  const auto cells = char_cells(segs, "CURVED");
  CHECK(cells.size() == 6);
  double total = 0.0, want = 0.0;
  for (const auto& c : cells) total += c.area();
  for (const auto& s : segs) want += s.quad.area();
  CHECK(total == doctest::Approx(want));
}

TEST_CASE("char cell examples") {
  const Quad q = FlatRect{10, 10, 80, 20}.quad();
  const std::vector<QuadSegment> seg{segment_from_quad(q, 0, {0, 1})};
  const auto one = char_cells(seg, "A");
  REQUIRE(one.size() == 1);
  for (int k = 0; k < 4; ++k) CHECK(distance(one[0].corners[k], q.corners[k]) < 1e-12);

  const std::vector<QuadSegment> seg4{segment_from_quad(q, 0, {0, 4})};
  for (const Quad& c : char_cells(seg4, "ABCD")) CHECK(c.top_length() == doctest::Approx(20.0));

  // Cells along arc segments split each chord evenly.
  const auto segs = divide_mask(testing::arc_mask(), "CURVED");
  const auto cells = char_cells(segs, "CURVED");
  std::size_t k = 0;
  for (const auto& sgm : segs) {
    const double each = sgm.length() / sgm.text_slice.size();
    for (int i = 0; i < sgm.text_slice.size(); ++i, ++k)
      CHECK(std::abs(cells[k].top_length() - each) < 0.01 * each);
  }
}

TEST_CASE("ocr reads CAT") {
  const auto flat = divide_mask(rect_polygon(10, 40, 108, 40), "CAT");
  const OcrResult r = ocr_decode(render_glyph_image(flat, "CAT", 128, 128), char_cells(flat, "CAT"));
  CHECK(r.decoded == "CAT");
  for (double c : r.confidences) CHECK(c > 0.9);

  const auto tilted = divide_mask(testing::rotated_rect(64, 64, 90, 30, std::numbers::pi / 4), "CAT");
  CHECK(ocr_decode(render_glyph_image(tilted, "CAT", 128, 128), char_cells(tilted, "CAT")).decoded == "CAT");

  const Image black(3, 128, 128, 0.0);
  CHECK(ocr_decode(black, char_cells(flat, "CAT")).decoded == "???");
}

TEST_CASE("ocr reads clean renders at several angles") {
  const std::string text = "Q7W";
  for (double deg : {0.0, 15.0, 45.0, 75.0}) {
    const auto segs = divide_mask(testing::rotated_rect(64, 64, 72, 28, deg * std::numbers::pi / 180.0), text);
    const GlyphImage img = render_glyph_image(segs, text, 128, 128);
    const OcrResult r = ocr_decode(img, char_cells(segs, text));
    CHECK(r.decoded == text);
    for (double c : r.confidences) CHECK(c > kOcrThreshold);
  }
}

TEST_CASE("ocr reports unreadable cells") {
  const GlyphImage blank(1, 32, 32, 0.0);
  const std::vector<Quad> cells{FlatRect{0, 0, 16, 32}.quad()};
  const OcrResult r = ocr_decode(blank, cells);
  CHECK(r.decoded == std::string(1, kUnknownChar));
}

}
