#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glyphguide/geometry.hpp"
#include "glyphguide/glyph.hpp"
#include "glyphguide/grid.hpp"
#include "glyphguide/rng.hpp"

namespace glyphguide {

struct NoiseSchedule {
  int steps = 0;
  std::vector<double> alpha_bar;  // steps + 1 entries, alpha_bar[0] == 1
  double eta = 0.0;

  // sigma_t of the DDIM update for the step t -> t - 1.
  double sigma(int t) const;
};

NoiseSchedule linear_schedule(int steps, double beta_start, double beta_end, double eta = 0.0);

// sqrt(abar_t) x + sqrt(1 - abar_t) e
LatentGrid forward_noise(const LatentGrid& x, const LatentGrid& e, int t, const NoiseSchedule& s);
LatentGrid predict_x0(const LatentGrid& z_t, const LatentGrid& eps, int t, const NoiseSchedule& s);
// noise may be null when the schedule is deterministic (eta == 0).
LatentGrid ddim_step(const LatentGrid& z_t, const LatentGrid& eps, int t, const NoiseSchedule& s,
                     NormalSource* noise);

// What the model is asked to draw.
struct SceneCondition {
  std::string scene_id;
  std::string text;
  std::vector<QuadSegment> segments;
  GlyphImage glyph;  // rendered layout, image resolution
};

using Denoiser = std::function<LatentGrid(const LatentGrid& z_t, int t, const SceneCondition& cond)>;
// May return a replacement for z_t before the denoiser sees it.
using GuidanceHook = std::function<std::optional<LatentGrid>(const LatentGrid& z_t, int t)>;

struct SampleOptions {
  bool trace = false;
  NormalSource* noise = nullptr;  // required when eta > 0
};

struct SampleResult {
  LatentGrid z0;
  std::vector<LatentGrid> x0_trace;  // predicted x0 at t = T, T-1, ..., 1
};

SampleResult sample(const Denoiser& denoiser, const NoiseSchedule& schedule, const LatentGrid& z_T,
                    const SceneCondition& cond, const GuidanceHook& hook = {},
                    const SampleOptions& options = {});

LatentGrid gaussian_latent(int channels, int height, int width, std::uint64_t seed,
                           std::uint64_t stream);

// Block-mean encoder and nearest-neighbor decoder standing in for a VAE.
class LatentCodec {
 public:
  explicit LatentCodec(int factor = 2);

  int factor() const { return factor_; }
  LatentGrid encode(const Image& img) const;
  Image decode(const LatentGrid& z) const;
  // Block mean of a glyph raster, replicated over channels.
  LatentGrid encode_glyph(const GlyphImage& g, int channels) const;

 private:
  int factor_;
};

}  // namespace glyphguide
