#pragma once

#include <string>

#include "glyphguide/glyph.hpp"
#include "glyphguide/grid.hpp"

namespace glyphguide {

// Binary netpbm with maxval 255; stored byte = round(255 * clamp(v, 0, 1)).
std::string encode_pgm(const GlyphImage& img);
std::string encode_ppm(const Image& img);
void write_pgm(const std::string& path, const GlyphImage& img);
void write_ppm(const std::string& path, const Image& img);
GlyphImage read_pgm(const std::string& path);
Image read_ppm(const std::string& path);

// Writes bytes to path, creating parent directories.
void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace glyphguide
