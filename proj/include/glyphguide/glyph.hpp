#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "glyphguide/font.hpp"
#include "glyphguide/geometry.hpp"
#include "glyphguide/grid.hpp"

namespace glyphguide {

struct GlyphTag {};
// Single-channel raster in [0,1]; 1 is ink under the default polarity.
using GlyphImage = PlanarGrid<GlyphTag>;

enum class Polarity { ink_on_black, black_on_ink };

// Placement of n characters inside a w x h rectangle. Every character gets a
// cell of width w / n; the glyph is drawn at integer scale and centered in
// its cell, leaving at least a 10% vertical margin and one scaled column of
// spacing between neighbors.
struct LineMetrics {
  int scale = 1;
  double cell_width = 0.0;
  double x_offset = 0.0;  // glyph box offset inside its cell
  double y_offset = 0.0;
};

LineMetrics line_metrics(double width, double height, int n_chars);

// Draws text into the axis-aligned rectangle by max-compositing ink.
void draw_text(GlyphImage& img, const FlatRect& rect, std::string_view text,
               const BitmapFont& font = BitmapFont::standard());

GlyphImage render_flat_glyph(const FlatLayout& layout, std::string_view text, int height, int width,
                             Polarity polarity = Polarity::ink_on_black);

GlyphImage render_glyph_image(std::span<const QuadSegment> segments, std::string_view text,
                              int height, int width, Polarity polarity = Polarity::ink_on_black);

// One quad per character, splitting each segment evenly along its baseline.
std::vector<Quad> char_cells(std::span<const QuadSegment> segments, std::string_view text);

}  // namespace glyphguide
