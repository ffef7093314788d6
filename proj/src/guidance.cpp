#include "glyphguide/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glyphguide {

void GuidanceConfig::validate(int steps) const {
  if (!(lambda >= -0.5 && lambda <= 0.5)) {
    throw ConfigError("lambda must lie in [-0.5, 0.5], got " + std::to_string(lambda));
  }
  if (!(rho > 0.0 && rho <= 2.0)) throw ConfigError("rho must lie in (0, 2], got " + std::to_string(rho));
  if (!(kappa_base >= 1.0) || !std::isfinite(kappa_base)) {
    throw ConfigError("kappa base must be a finite value >= 1");
  }
  for (int t : refine_steps) {
    if (t < 1 || t > steps) {
      throw ConfigError("refine step " + std::to_string(t) + " outside [1, " + std::to_string(steps) + "]");
    }
  }
}

bool GuidanceConfig::active() const {
  return (use_srb || use_sib) && (lambda != 0.0 || literal_zero_lambda);
}

bool GuidanceConfig::refines(int t) const {
  return refine_steps.empty() || std::find(refine_steps.begin(), refine_steps.end(), t) != refine_steps.end();
}

GuidanceConfig guidance_off() {
  GuidanceConfig c;
  c.use_srb = c.use_sib = c.use_adain = false;
  return c;
}

double kappa(int t, int steps, double base) {
  if (t < 1 || t > steps) throw ConfigError("kappa step outside [1, T]");
  return std::pow(base, t - steps);
}

namespace {

void check_mask(const LatentGrid& z, const RegionMask& m, const char* what) {
  if (m.height() != z.height() || m.width() != z.width()) {
    throw ShapeError(std::string(what) + ": mask " + m.shape_string() + " vs grid " + z.shape_string());
  }
}

void check_same(const LatentGrid& a, const LatentGrid& b, const char* what) {
  if (!a.same_shape(b)) throw ShapeError(std::string(what) + ": " + a.shape_string() + " vs " + b.shape_string());
}

}  // namespace

LatentGrid semantic_rectify(const LatentGrid& z_t, const SemanticPrior& prior, const RegionMask& l_p,
                            bool use_adain) {
  check_same(prior.z_f, z_t, "semantic_rectify");
  check_mask(z_t, l_p, "semantic_rectify");
  return masked_blend(use_adain ? adain(prior.z_f, z_t) : prior.z_f, z_t, l_p);
}

LatentGrid structure_inject(const LatentGrid& z_g, const LatentGrid& z_t, const RegionMask& l_p,
                            bool use_adain) {
  check_same(z_g, z_t, "structure_inject");
  check_mask(z_t, l_p, "structure_inject");
  return masked_blend(use_adain ? adain(z_g, z_t) : z_g, z_t, l_p);
}

LatentGrid merge_priors(const LatentGrid& z_tilde, const LatentGrid& adain_g, double rho) {
  check_same(z_tilde, adain_g, "merge_priors");
  LatentGrid out = z_tilde;
  auto o = out.values();
  const auto g = adain_g.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = rho * g[i] + (1.0 - rho) * o[i];
  return out;
}

LatentGrid apply_guidance(const LatentGrid& z_t, const LatentGrid& z_hat, const RegionMask& l_p,
                          double lambda, double kappa_t) {
  check_same(z_t, z_hat, "apply_guidance");
  check_mask(z_t, l_p, "apply_guidance");
  if (!(kappa_t > 0.0 && kappa_t <= 1.0)) throw ConfigError("kappa must lie in (0, 1]");
  LatentGrid out = z_t;
  const auto m = l_p.plane(0);
  for (int c = 0; c < z_t.channels(); ++c) {
    auto o = out.plane(c);
    const auto h = z_hat.plane(c);
    for (std::size_t k = 0; k < o.size(); ++k) {
      if (m[k] == 0.0) continue;
      const double guided = kappa_t * lambda * h[k] + (1.0 - kappa_t) * o[k];
      o[k] = guided * m[k] + o[k] * (1.0 - m[k]);
    }
  }
  return out;
}

LatentGrid build_reference(const GenerationContext& ctx, const SceneCondition& flat_cond,
                           std::uint64_t seed) {
  const VtgmDenoiser den(*ctx.corpus, ctx.schedule, ctx.codec, ctx.model, flat_cond);
  const LatentGrid z_T =
      gaussian_latent(ctx.channels(), ctx.latent_height(), ctx.latent_width(), seed, kReferenceStream);
  NormalSource noise(seed, kReferenceStream + 100);
  SampleOptions opts;
  opts.noise = &noise;
  return sample(den.as_denoiser(), ctx.schedule, z_T, flat_cond, {}, opts).z0;
}

SemanticPrior align_reference(const LatentGrid& z_ref, const FlatLayout& flat,
                              std::span<const QuadSegment> segments, Interp interp, int factor) {
  if (flat.rects.size() != segments.size()) {
    throw GeometryError("flat layout and segment list differ in length");
  }
  SemanticPrior prior{LatentGrid(z_ref.channels(), z_ref.height(), z_ref.width()),
                      RegionMask(1, z_ref.height(), z_ref.width())};
  const double inv = 1.0 / factor;
  auto scaled = [inv](const Quad& q) {
    Quad s = q;
    for (Vec2& p : s.corners) p = p * inv;
    return s;
  };
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const FlatRect& r = flat.rects[i];
    const RigidTransform& tf = flat.transforms[i];
    if (!(tf.scale > 0.0) || !std::isfinite(tf.scale)) throw GeometryError("degenerate segment transform");
    const int out_h = std::max(1, static_cast<int>(std::lround(r.height * inv)));
    const int out_w = std::max(1, static_cast<int>(std::lround(r.width * inv)));
    const LatentGrid patch = extract_region(z_ref, scaled(r.quad()), out_h, out_w, interp);
    // Where the transform puts the flat rect in the user layout.
    const Quad placed{{tf.apply({r.x, r.y}), tf.apply({r.x + r.width, r.y}),
                       tf.apply({r.x + r.width, r.y + r.height}), tf.apply({r.x, r.y + r.height})}};
    const Quad target = scaled(placed);
    prior.z_f = paste_region(prior.z_f, patch, target, interp);
    const RegionMask foot = quad_footprint(target, z_ref.height(), z_ref.width());
    auto vm = prior.valid_mask.plane(0);
    const auto fm = foot.plane(0);
    for (std::size_t k = 0; k < vm.size(); ++k) vm[k] = std::max(vm[k], fm[k]);
  }
  return prior;
}

namespace {

struct Prepared {
  std::string text;
  std::vector<QuadSegment> segments;
  FlatLayout flat;
  GlyphImage glyph;
  GlyphImage flat_glyph;
  RegionMask region;
};

Prepared prepare(const GenerationContext& ctx, const GenerationRequest& req) {
  if (ctx.corpus == nullptr) throw ConditionError("generation context has no corpus");
  if (ctx.corpus->subset(req.scene_id).empty()) {
    throw ConditionError("unknown scene '" + req.scene_id + "'");
  }
  Prepared p;
  p.text = normalize_text(req.text);
  if (p.text.empty()) throw InputError("text must not be empty");
  constexpr double slack = 1e-6;
  for (const Vec2& v : req.mask.vertices()) {
    if (v.x < -slack || v.y < -slack || v.x > ctx.image_width + slack || v.y > ctx.image_height + slack) {
      throw InputError("mask vertex (" + std::to_string(v.x) + ", " + std::to_string(v.y) + ") lies outside the " +
                       std::to_string(ctx.image_height) + "x" + std::to_string(ctx.image_width) + " canvas");
    }
  }
  p.segments = divide_mask(req.mask, p.text);
  p.flat = flatten_segments(p.segments, ctx.image_height, ctx.image_width);
  p.glyph = render_glyph_image(p.segments, p.text, ctx.image_height, ctx.image_width);
  p.flat_glyph = render_flat_glyph(p.flat, p.text, ctx.image_height, ctx.image_width);
  const PolygonMask polys[] = {req.mask};
  p.region = rasterize_mask(polys, ctx.image_height, ctx.image_width, ctx.codec.factor());
  return p;
}

GenerationResult finish(const GenerationContext& ctx, Prepared&& p, SampleResult&& s) {
  GenerationResult r;
  r.image = ctx.codec.decode(s.z0);
  r.z0 = std::move(s.z0);
  r.x0_trace = std::move(s.x0_trace);
  r.segments = std::move(p.segments);
  r.flat = std::move(p.flat);
  r.glyph = std::move(p.glyph);
  r.flat_glyph = std::move(p.flat_glyph);
  r.region = std::move(p.region);
  return r;
}

}  // namespace

GenerationResult unguided_generate(const GenerationContext& ctx, const GenerationRequest& req,
                                   const GenerateOptions& options) {
  Prepared p = prepare(ctx, req);
  const SceneCondition cond{req.scene_id, p.text, p.segments, p.glyph};
  const VtgmDenoiser den(*ctx.corpus, ctx.schedule, ctx.codec, ctx.model, cond);
  const LatentGrid z_T =
      gaussian_latent(ctx.channels(), ctx.latent_height(), ctx.latent_width(), req.seed, kMainStream);
  NormalSource noise(req.seed, kMainStream + 100);
  SampleOptions opts;
  opts.trace = options.trace;
  opts.noise = &noise;
  SampleResult s = sample(den.as_denoiser(), ctx.schedule, z_T, cond, {}, opts);
  return finish(ctx, std::move(p), std::move(s));
}

GenerationResult stgen_generate(const GenerationContext& ctx, const GenerationRequest& req,
                                const GuidanceConfig& config, const GenerateOptions& options) {
  config.validate(ctx.schedule.steps);
  if (!config.active()) return unguided_generate(ctx, req, options);

  Prepared p = prepare(ctx, req);
  const int ch = ctx.channels();
  const SceneCondition cond{req.scene_id, p.text, p.segments, p.glyph};
  const LatentGrid z_g = ctx.codec.encode_glyph(p.glyph, ch);

  std::optional<SemanticPrior> prior;
  std::optional<LatentGrid> reference;
  if (config.use_srb) {
    const SceneCondition flat_cond{req.scene_id, p.text, flat_segments(p.flat), p.flat_glyph};
    reference = build_reference(ctx, flat_cond, req.seed);
    prior = align_reference(*reference, p.flat, p.segments, config.interp, ctx.codec.factor());
  }

  const RegionMask& l_p = p.region;
  const int steps = ctx.schedule.steps;
  std::vector<GuidanceTraceEntry> gtrace;
  GuidanceHook hook = [&](const LatentGrid& z, int t) -> std::optional<LatentGrid> {
    if (!config.refines(t)) return std::nullopt;
    const double k = kappa(t, steps, config.kappa_base);
    LatentGrid z_hat;
    if (config.use_srb) {
      z_hat = semantic_rectify(z, *prior, l_p, config.use_adain);
      if (config.use_sib) z_hat = merge_priors(z_hat, config.use_adain ? adain(z_g, z) : z_g, config.rho);
    } else {
      z_hat = structure_inject(z_g, z, l_p, config.use_adain);
    }
    LatentGrid out = apply_guidance(z, z_hat, l_p, config.lambda, k);
    if (options.trace) {
      double d2 = 0.0;
      const auto m = l_p.plane(0);
      for (int c = 0; c < z.channels(); ++c) {
        const auto a = z.plane(c);
        const auto b = out.plane(c);
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (m[i] != 0.0) d2 += (b[i] - a[i]) * (b[i] - a[i]);
        }
      }
      gtrace.push_back({t, k, config.use_srb, config.use_sib, std::sqrt(d2)});
    }
    return out;
  };

  const VtgmDenoiser den(*ctx.corpus, ctx.schedule, ctx.codec, ctx.model, cond);
  const LatentGrid z_T =
      gaussian_latent(ch, ctx.latent_height(), ctx.latent_width(), req.seed, kMainStream);
  NormalSource noise(req.seed, kMainStream + 100);
  SampleOptions opts;
  opts.trace = options.trace;
  opts.noise = &noise;
  SampleResult s = sample(den.as_denoiser(), ctx.schedule, z_T, cond, hook, opts);
  GenerationResult r = finish(ctx, std::move(p), std::move(s));
  r.reference = std::move(reference);
  r.guidance_trace = std::move(gtrace);
  return r;
}

}  // namespace glyphguide
