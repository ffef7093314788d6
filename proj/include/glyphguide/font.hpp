#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace glyphguide {

inline constexpr int kGlyphCols = 5;
inline constexpr int kGlyphRows = 7;

// One 5x7 bitmap: seven rows, five low bits per row, bit 4 is the leftmost column.
struct GlyphBitmap {
  std::array<std::uint8_t, kGlyphRows> rows{};

  bool ink(int col, int row) const { return (rows[row] >> (kGlyphCols - 1 - col)) & 1u; }
  int ink_count() const;
};

class BitmapFont {
 public:
  // The embedded A-Z, 0-9, space table.
  static const BitmapFont& standard();

  explicit BitmapFont(std::map<char, GlyphBitmap> glyphs);

  bool has(char c) const { return glyphs_.count(c) != 0; }
  const GlyphBitmap& glyph(char c) const;
  // Characters in table order (letters, digits, then space).
  const std::string& charset() const { return charset_; }
  // Characters that carry ink, i.e. every printable glyph but space.
  const std::string& inked_charset() const { return inked_; }

 private:
  std::map<char, GlyphBitmap> glyphs_;
  std::string charset_;
  std::string inked_;
};

// Upper-cases text and rejects anything outside the font, listing offenders.
std::string normalize_text(std::string_view text, const BitmapFont& font = BitmapFont::standard());

}  // namespace glyphguide
