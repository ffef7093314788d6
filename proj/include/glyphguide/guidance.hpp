#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glyphguide/corpus.hpp"
#include "glyphguide/diffusion.hpp"
#include "glyphguide/geometry.hpp"
#include "glyphguide/glyph.hpp"
#include "glyphguide/grid.hpp"

namespace glyphguide {

struct GuidanceConfig {
  double lambda = 0.5;
  double rho = 0.5;
  double kappa_base = 10.0;
  std::vector<int> refine_steps;  // empty means every step
  bool use_srb = true;
  bool use_sib = true;
  bool use_adain = true;
  Interp interp = Interp::bilinear;
  // Debug: evaluate the update literally at lambda == 0 instead of skipping it.
  bool literal_zero_lambda = false;

  void validate(int steps) const;
  // False when the run reduces to plain sampling.
  bool active() const;
  bool refines(int t) const;
};

GuidanceConfig guidance_off();

double kappa(int t, int steps, double base = 10.0);

struct SemanticPrior {
  LatentGrid z_f;
  RegionMask valid_mask;
};

LatentGrid semantic_rectify(const LatentGrid& z_t, const SemanticPrior& prior, const RegionMask& l_p,
                            bool use_adain);
LatentGrid structure_inject(const LatentGrid& z_g, const LatentGrid& z_t, const RegionMask& l_p,
                            bool use_adain = true);
// rho * adain_g + (1 - rho) * z_tilde
LatentGrid merge_priors(const LatentGrid& z_tilde, const LatentGrid& adain_g, double rho);
// (kappa lambda z_hat + (1 - kappa) z_t) inside l_p, z_t outside.
LatentGrid apply_guidance(const LatentGrid& z_t, const LatentGrid& z_hat, const RegionMask& l_p,
                          double lambda, double kappa_t);

// Shared, read-only model state for generations.
struct GenerationContext {
  const FlatTextCorpus* corpus = nullptr;
  NoiseSchedule schedule;
  LatentCodec codec{2};
  VtgmParams model;
  int image_height = 128;
  int image_width = 128;

  int latent_height() const { return image_height / codec.factor(); }
  int latent_width() const { return image_width / codec.factor(); }
  int channels() const { return corpus->channels(); }
};

// Noise stream ids derived from the run seed.
inline constexpr std::uint64_t kMainStream = 0;
inline constexpr std::uint64_t kReferenceStream = 1;

// Unguided sample of the flat request; the reference latent z^f_0.
LatentGrid build_reference(const GenerationContext& ctx, const SceneCondition& flat_cond,
                           std::uint64_t seed);

// Carries each flat rect's content through its transform into the user layout.
SemanticPrior align_reference(const LatentGrid& z_ref, const FlatLayout& flat,
                              std::span<const QuadSegment> segments, Interp interp, int factor);

struct GenerationRequest {
  std::string scene_id;
  PolygonMask mask;
  std::string text;
  std::uint64_t seed = 0;
};

struct GuidanceTraceEntry {
  int t = 0;
  double kappa = 0.0;
  bool srb = false;
  bool sib = false;
  double masked_delta = 0.0;  // L2 norm of the change inside l_p
};

struct GenerationResult {
  Image image;
  LatentGrid z0;
  std::vector<QuadSegment> segments;
  FlatLayout flat;
  GlyphImage glyph;
  GlyphImage flat_glyph;
  RegionMask region;
  std::optional<LatentGrid> reference;
  std::vector<LatentGrid> x0_trace;
  std::vector<GuidanceTraceEntry> guidance_trace;
};

struct GenerateOptions {
  bool trace = false;
};

GenerationResult stgen_generate(const GenerationContext& ctx, const GenerationRequest& req,
                                const GuidanceConfig& config, const GenerateOptions& options = {});
// Plain sampling of the same request with the same z_T.
GenerationResult unguided_generate(const GenerationContext& ctx, const GenerationRequest& req,
                                   const GenerateOptions& options = {});

}  // namespace glyphguide
