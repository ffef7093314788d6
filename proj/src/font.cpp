#include "glyphguide/font.hpp"

#include <bit>
#include <cctype>

#include "glyphguide/error.hpp"

namespace glyphguide {

namespace {

struct Row {
  char c;
  GlyphBitmap bitmap;
};

// HD44780-style 5x7 shapes.
constexpr Row kTable[] = {
    {'A', {{0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}},
    {'B', {{0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}}},
    {'C', {{0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}},
    {'D', {{0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}}},
    {'E', {{0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}},
    {'F', {{0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}}},
    {'G', {{0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}},
    {'H', {{0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}},
    {'I', {{0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}},
    {'J', {{0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}}},
    {'K', {{0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}},
    {'L', {{0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}}},
    {'M', {{0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}},
    {'N', {{0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}}},
    {'O', {{0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}},
    {'P', {{0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}}},
    {'Q', {{0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}},
    {'R', {{0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}}},
    {'S', {{0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}},
    {'T', {{0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}}},
    {'U', {{0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}},
    {'V', {{0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}}},
    {'W', {{0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}},
    {'X', {{0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}}},
    {'Y', {{0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}},
    {'Z', {{0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}}},
    {'0', {{0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}},
    {'1', {{0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}}},
    {'2', {{0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}},
    {'3', {{0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}}},
    {'4', {{0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}},
    {'5', {{0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}}},
    {'6', {{0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}},
    {'7', {{0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}}},
    {'8', {{0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}},
    {'9', {{0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}}},
    {' ', {{0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}}},
};

}  // namespace

int GlyphBitmap::ink_count() const {
  int n = 0;
  for (auto r : rows) n += std::popcount(static_cast<unsigned>(r & 0x1F));
  return n;
}

const BitmapFont& BitmapFont::standard() {
  static const BitmapFont font = [] {
    std::map<char, GlyphBitmap> g;
    for (const Row& r : kTable) g[r.c] = r.bitmap;
    BitmapFont f(std::move(g));
    f.charset_.clear();
    f.inked_.clear();
    for (const Row& r : kTable) {
      f.charset_ += r.c;
      if (r.bitmap.ink_count() > 0) f.inked_ += r.c;
    }
    return f;
  }();
  return font;
}

BitmapFont::BitmapFont(std::map<char, GlyphBitmap> glyphs) : glyphs_(std::move(glyphs)) {
  for (const auto& [c, bm] : glyphs_) {
    charset_ += c;
    if (bm.ink_count() > 0) inked_ += c;
  }
}

const GlyphBitmap& BitmapFont::glyph(char c) const {
  const auto it = glyphs_.find(c);
  if (it == glyphs_.end()) throw InputError(std::string("unsupported character '") + c + "'");
  return it->second;
}

std::string normalize_text(std::string_view text, const BitmapFont& font) {
  std::string out;
  std::string bad;
  for (char ch : text) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (font.has(u)) {
      out += u;
    } else if (bad.find(ch) == std::string::npos) {
      bad += ch;
    }
  }
  if (!bad.empty()) {
    std::string list;
    for (char c : bad) {
      if (!list.empty()) list += ", ";
      list += '\'';
      list += c;
      list += '\'';
    }
    throw InputError("unsupported characters in text: " + list);
  }
  return out;
}

}  // namespace glyphguide
