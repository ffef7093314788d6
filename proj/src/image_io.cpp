#include "glyphguide/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace glyphguide {

namespace {

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

std::string header(const char* magic, int w, int h) {
  return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

struct Netpbm {
  int width = 0;
  int height = 0;
  std::string pixels;
};

Netpbm parse(const std::string& bytes, const std::string& magic, int channels, const std::string& path) {
  std::istringstream in(bytes);
  std::string m;
  int w = 0, h = 0, maxval = 0;
  in >> m >> w >> h >> maxval;
  if (m != magic || w <= 0 || h <= 0 || maxval != 255) {
    throw InputError("'" + path + "' is not a " + magic + " file with maxval 255");
  }
  in.get();
  Netpbm n{w, h, std::string(static_cast<std::size_t>(w) * h * channels, '\0')};
  in.read(n.pixels.data(), static_cast<std::streamsize>(n.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(n.pixels.size())) {
    throw InputError("'" + path + "' is truncated");
  }
  return n;
}

}  // namespace

std::string encode_pgm(const GlyphImage& img) {
  std::string out = header("P5", img.width(), img.height());
  for (double v : img.plane(0)) out += static_cast<char>(to_byte(v));
  return out;
}

std::string encode_ppm(const Image& img) {
  if (img.channels() != 3) throw ShapeError("PPM output needs 3 channels, got " + img.shape_string());
  std::string out = header("P6", img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) out += static_cast<char>(to_byte(img.at(c, y, x)));
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& bytes) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_pgm(const std::string& path, const GlyphImage& img) { write_file(path, encode_pgm(img)); }
void write_ppm(const std::string& path, const Image& img) { write_file(path, encode_ppm(img)); }

GlyphImage read_pgm(const std::string& path) {
  const Netpbm n = parse(read_file(path), "P5", 1, path);
  GlyphImage img(1, n.height, n.width);
  auto p = img.plane(0);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<unsigned char>(n.pixels[i]) / 255.0;
  return img;
}

Image read_ppm(const std::string& path) {
  const Netpbm n = parse(read_file(path), "P6", 3, path);
  Image img(3, n.height, n.width);
  std::size_t i = 0;
  for (int y = 0; y < n.height; ++y) {
    for (int x = 0; x < n.width; ++x) {
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = static_cast<unsigned char>(n.pixels[i++]) / 255.0;
    }
  }
  return img;
}

}  // namespace glyphguide
