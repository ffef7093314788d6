#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "glyphguide/diffusion.hpp"

namespace glyphguide {

// One quantized text row of the flat corpus. Characters sit in fixed slots
// starting at (x, y); slot pitch follows from the row height.
struct CorpusRow {
  int y = 0;
  int x = 0;
  int height = 36;
  int slots = 5;

  double pitch() const;
  FlatRect rect(int n_chars) const;
};

struct CorpusManifest {
  std::uint64_t seed = 2024;
  int image_height = 128;
  int image_width = 128;
  int factor = 2;
  double tau = 0.05;
  std::vector<std::string> scenes;
  std::vector<std::string> texts;  // empty: cyclic texts covering every character in every slot
  std::vector<CorpusRow> rows;
};

CorpusManifest default_corpus_manifest();
// texts[j][k] = charset[(j + 7k) mod 36]: every inked character in every slot.
std::vector<std::string> cyclic_texts(int length);

struct SceneStyle {
  std::string id;
  Image background;
  LatentGrid background_latent;
  std::array<double, 3> ink{};
};

// Smooth gradient plus a faint sinusoidal texture, with a bright ink color.
SceneStyle make_scene(const std::string& id, std::uint64_t seed, int height, int width,
                      const LatentCodec& codec);

struct CorpusExemplar {
  std::string scene_id;
  std::string text;
  int row = 0;
  // Either an explicit latent, or a scene style plus glyph composited as
  // background + (ink - background) * glyph in latent space.
  std::shared_ptr<const LatentGrid> explicit_latent;
  std::shared_ptr<const SceneStyle> style;
  std::shared_ptr<const LatentGrid> glyph;  // 1 channel, latent resolution; may be null

  LatentGrid latent() const;
};

class FlatTextCorpus {
 public:
  FlatTextCorpus(std::vector<CorpusExemplar> exemplars, double tau);

  const std::vector<CorpusExemplar>& exemplars() const { return exemplars_; }
  double tau() const { return tau_; }
  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::vector<std::size_t> subset(std::string_view scene_id) const;
  std::vector<std::string> scene_ids() const;

 private:
  std::vector<CorpusExemplar> exemplars_;
  double tau_;
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
};

FlatTextCorpus build_corpus(const CorpusManifest& manifest, const LatentCodec& codec);

// Global kernel-mixture posterior over the scene's exemplars.
struct GmmPosterior {
  std::vector<double> weights;  // one per corpus exemplar; 0 outside the scene
  LatentGrid mean;
};

GmmPosterior gmm_posterior(const FlatTextCorpus& corpus, const LatentGrid& z_t, int t,
                           const NoiseSchedule& schedule, std::string_view scene_id);
LatentGrid gmm_epsilon(const FlatTextCorpus& corpus, const LatentGrid& z_t, int t,
                       const NoiseSchedule& schedule, const SceneCondition& cond);

// Spatially local, glyph-conditioned kernel mixture: every latent cell picks
// its own posterior over the scene's exemplars. The log-weight of exemplar i
// at a cell is
//   -box_r(sum_c (z - sqrt(abar) x_i)^2) / (2 (1 - abar + abar tau^2))
//   -box_R((g - g_i)^2) / (2 tau_g^2)
// where g is the encoded condition glyph and box_k sums a (2k+1)^2 window.
// A negative likelihood radius sums over the whole grid; a non-positive
// condition_tau drops the glyph term. Both together reduce to gmm_epsilon.
struct VtgmParams {
  int likelihood_radius = 0;
  int condition_radius = 2;
  double condition_tau = 0.5;
};

class VtgmDenoiser {
 public:
  VtgmDenoiser(const FlatTextCorpus& corpus, const NoiseSchedule& schedule, const LatentCodec& codec,
               const VtgmParams& params, const SceneCondition& cond);

  LatentGrid predict(const LatentGrid& z_t, int t) const;  // x0 estimate
  LatentGrid epsilon(const LatentGrid& z_t, int t) const;
  Denoiser as_denoiser() const;

 private:
  void log_weights(const LatentGrid& z_t, int t, std::vector<double>& lw) const;

  const FlatTextCorpus* corpus_;
  const NoiseSchedule* schedule_;
  VtgmParams params_;
  std::string scene_id_;
  std::string text_;
  std::vector<std::size_t> members_;
  std::vector<double> prior_;  // members x cells
  bool factored_ = false;
  // factored form: x_i = base + delta * glyph_i
  LatentGrid base_;
  LatentGrid delta_;
  std::vector<const LatentGrid*> glyphs_;
  std::vector<LatentGrid> latents_;  // generic form
};

// Zero-padded (2r+1)^2 window sums over an h x w plane; r < 0 gives the plane total everywhere.
void box_sum(std::span<const double> in, int height, int width, int radius, std::span<double> out);

}  // namespace glyphguide
