#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "glyphguide/error.hpp"
#include "glyphguide/vec2.hpp"

namespace glyphguide {

// Planar C x H x W storage, row-major per channel. The tag keeps latents,
// images and glyph rasters from being mixed up by accident.
template <class Tag>
class PlanarGrid {
 public:
  PlanarGrid() = default;
  PlanarGrid(int channels, int height, int width, double fill = 0.0)
      : channels_(channels), height_(height), width_(width) {
    check_dims();
    data_.assign(static_cast<std::size_t>(channels) * height * width, fill);
  }
  PlanarGrid(int channels, int height, int width, std::vector<double> data)
      : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
    check_dims();
    if (data_.size() != static_cast<std::size_t>(channels) * height * width) {
      throw ShapeError("grid data length does not match " + shape_string());
    }
  }

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t plane_size() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<double> plane(int c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const double> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  template <class Other>
  bool same_shape(const PlanarGrid<Other>& o) const {
    return channels_ == o.channels() && height_ == o.height() && width_ == o.width();
  }

  std::string shape_string() const {
    return std::to_string(channels_) + "x" + std::to_string(height_) + "x" + std::to_string(width_);
  }

  friend bool operator==(const PlanarGrid&, const PlanarGrid&) = default;

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }
  void check_dims() const {
    if (channels_ <= 0 || height_ <= 0 || width_ <= 0) {
      throw ShapeError("grid dimensions must be positive, got " + shape_string());
    }
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

struct LatentTag {};
struct ImageTag {};
struct MaskTag {};

using LatentGrid = PlanarGrid<LatentTag>;
using Image = PlanarGrid<ImageTag>;
// Single-channel grid with every value in [0,1].
using RegionMask = PlanarGrid<MaskTag>;

RegionMask make_mask(int height, int width, std::vector<double> values);

struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> std;
};

enum class Interp { nearest, bilinear };

inline constexpr double kAdainStdFloor = 1e-5;

ChannelStats channel_stats(const LatentGrid& g);
LatentGrid adain(const LatentGrid& content, const LatentGrid& style,
                 double std_floor = kAdainStdFloor);
// a * m + b * (1 - m), cellwise; m broadcasts over channels.
LatentGrid masked_blend(const LatentGrid& a, const LatentGrid& b, const RegionMask& m);

// Point sampling in cell units: cell (x, y) has its center at (x + 0.5, y + 0.5).
// Taps outside the grid read as 0.
template <class Tag>
double sample_at(const PlanarGrid<Tag>& g, int c, Vec2 p, Interp mode) {
  const int h = g.height();
  const int w = g.width();
  if (mode == Interp::nearest) {
    const double fx = std::floor(p.x);
    const double fy = std::floor(p.y);
    if (fx < 0.0 || fy < 0.0 || fx >= w || fy >= h) return 0.0;
    return g.at(c, static_cast<int>(fy), static_cast<int>(fx));
  }
  const double fx = p.x - 0.5;
  const double fy = p.y - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  if (x0f < -1.0 || y0f < -1.0 || x0f >= w || y0f >= h) return 0.0;
  const int x0 = static_cast<int>(x0f);
  const int y0 = static_cast<int>(y0f);
  const double ax = fx - x0f;
  const double ay = fy - y0f;
  auto tap = [&](int y, int x) {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : g.at(c, y, x);
  };
  double v = 0.0;
  if (ax < 1.0 && ay < 1.0) v += (1.0 - ax) * (1.0 - ay) * tap(y0, x0);
  if (ax > 0.0 && ay < 1.0) v += ax * (1.0 - ay) * tap(y0, x0 + 1);
  if (ax < 1.0 && ay > 0.0) v += (1.0 - ax) * ay * tap(y0 + 1, x0);
  if (ax > 0.0 && ay > 0.0) v += ax * ay * tap(y0 + 1, x0 + 1);
  return v;
}

// Output cell p reads the input at R(-angle) (p - center) + center.
LatentGrid rotate_resample(const LatentGrid& g, double angle, Vec2 center,
                           Interp mode = Interp::bilinear);

// Samples g along the quad's frame into an out_h x out_w axis-aligned grid.
// Quad corners are in cell units of g.
LatentGrid extract_region(const LatentGrid& g, const Quad& quad, int out_h, int out_w,
                          Interp mode = Interp::bilinear);

// Writes src into the cells of dst whose centers fall inside quad. The
// complement of the quad is left untouched.
LatentGrid paste_region(const LatentGrid& dst, const LatentGrid& src, const Quad& quad,
                        Interp mode = Interp::bilinear);

// 1 where a cell center falls inside quad.
RegionMask quad_footprint(const Quad& quad, int height, int width);

bool all_finite(std::span<const double> values);

}  // namespace glyphguide
