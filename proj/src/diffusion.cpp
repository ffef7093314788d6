#include "glyphguide/diffusion.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace glyphguide {

double NoiseSchedule::sigma(int t) const {
  if (eta == 0.0) return 0.0;
  const double a = alpha_bar[t];
  const double ap = alpha_bar[t - 1];
  const double var = eta * eta * (1.0 - ap) / (1.0 - a) * (1.0 - a / ap);
  return std::sqrt(std::max(var, 0.0));
}

NoiseSchedule linear_schedule(int steps, double beta_start, double beta_end, double eta) {
  if (steps < 1) throw ScheduleError("schedule needs at least one step");
  if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
    throw ScheduleError("beta range must satisfy 0 < start <= end < 1, got " +
                        std::to_string(beta_start) + ".." + std::to_string(beta_end));
  }
  if (!(eta >= 0.0)) throw ScheduleError("eta must be non-negative");
  NoiseSchedule s;
  s.steps = steps;
  s.eta = eta;
  s.alpha_bar.assign(steps + 1, 1.0);
  for (int t = 1; t <= steps; ++t) {
    const double beta =
        steps == 1 ? beta_start : beta_start + (beta_end - beta_start) * (t - 1) / (steps - 1);
    s.alpha_bar[t] = s.alpha_bar[t - 1] * (1.0 - beta);
  }
  return s;
}

namespace {

void check_step(int t, const NoiseSchedule& s) {
  if (t < 1 || t > s.steps) {
    throw ScheduleError("step " + std::to_string(t) + " outside [1, " + std::to_string(s.steps) + "]");
  }
}

void check_pair(const LatentGrid& a, const LatentGrid& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": " + a.shape_string() + " vs " + b.shape_string());
  }
}

}  // namespace

LatentGrid forward_noise(const LatentGrid& x, const LatentGrid& e, int t, const NoiseSchedule& s) {
  check_step(t, s);
  check_pair(x, e, "forward_noise");
  const double sa = std::sqrt(s.alpha_bar[t]);
  const double sb = std::sqrt(1.0 - s.alpha_bar[t]);
  LatentGrid out = x;
  auto o = out.values();
  const auto ev = e.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = sa * o[i] + sb * ev[i];
  return out;
}

LatentGrid predict_x0(const LatentGrid& z_t, const LatentGrid& eps, int t, const NoiseSchedule& s) {
  check_step(t, s);
  check_pair(z_t, eps, "predict_x0");
  const double sa = std::sqrt(s.alpha_bar[t]);
  const double sb = std::sqrt(1.0 - s.alpha_bar[t]);
  LatentGrid out = z_t;
  auto o = out.values();
  const auto ev = eps.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (o[i] - sb * ev[i]) / sa;
  return out;
}

LatentGrid ddim_step(const LatentGrid& z_t, const LatentGrid& eps, int t, const NoiseSchedule& s,
                     NormalSource* noise) {
  const LatentGrid x0 = predict_x0(z_t, eps, t, s);
  const double sigma = s.sigma(t);
  const double ap = s.alpha_bar[t - 1];
  double dir = 1.0 - ap - sigma * sigma;
  if (dir < 0.0) {
    if (dir < -1e-12) {
      throw ScheduleError("ddim_step: 1 - abar_{t-1} - sigma^2 is negative at t=" + std::to_string(t));
    }
    dir = 0.0;
  }
  if (sigma > 0.0 && noise == nullptr) throw ScheduleError("ddim_step: eta > 0 needs a noise source");
  const double c0 = std::sqrt(ap);
  const double c1 = std::sqrt(dir);
  LatentGrid out = x0;
  auto o = out.values();
  const auto ev = eps.values();
  for (std::size_t i = 0; i < o.size(); ++i) {
    o[i] = c0 * o[i] + c1 * ev[i];
    if (sigma > 0.0) o[i] += sigma * noise->next();
  }
  return out;
}

SampleResult sample(const Denoiser& denoiser, const NoiseSchedule& schedule, const LatentGrid& z_T,
                    const SceneCondition& cond, const GuidanceHook& hook, const SampleOptions& options) {
  SampleResult result;
  LatentGrid z = z_T;
  for (int t = schedule.steps; t >= 1; --t) {
    if (hook) {
      if (auto replaced = hook(z, t)) {
        check_pair(z, *replaced, "guidance hook output");
        z = std::move(*replaced);
      }
    }
    const LatentGrid eps = denoiser(z, t, cond);
    check_pair(z, eps, "denoiser output");
    if (!all_finite(eps.values())) {
      throw ConditionError("denoiser produced non-finite values at t=" + std::to_string(t));
    }
    if (options.trace) result.x0_trace.push_back(predict_x0(z, eps, t, schedule));
    z = ddim_step(z, eps, t, schedule, options.noise);
  }
  result.z0 = std::move(z);
  return result;
}

LatentGrid gaussian_latent(int channels, int height, int width, std::uint64_t seed,
                           std::uint64_t stream) {
  LatentGrid z(channels, height, width);
  NormalSource src(seed, stream);
  src.fill(z.values());
  return z;
}

LatentCodec::LatentCodec(int factor) : factor_(factor) {
  if (factor < 1) throw ShapeError("codec factor must be at least 1");
}

namespace {

template <class Tag>
LatentGrid block_mean(const PlanarGrid<Tag>& img, int f, int channels_out) {
  if (img.height() % f != 0 || img.width() % f != 0) {
    throw ShapeError("image " + img.shape_string() + " is not divisible by codec factor " +
                     std::to_string(f));
  }
  const int h = img.height() / f;
  const int w = img.width() / f;
  LatentGrid z(channels_out, h, w);
  const double inv = 1.0 / (f * f);
  for (int c = 0; c < channels_out; ++c) {
    const int src_c = img.channels() == 1 ? 0 : c;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        for (int j = 0; j < f; ++j) {
          for (int i = 0; i < f; ++i) s += img.at(src_c, y * f + j, x * f + i);
        }
        z.at(c, y, x) = s * inv;
      }
    }
  }
  return z;
}

}  // namespace

LatentGrid LatentCodec::encode(const Image& img) const { return block_mean(img, factor_, img.channels()); }

LatentGrid LatentCodec::encode_glyph(const GlyphImage& g, int channels) const {
  return block_mean(g, factor_, channels);
}

Image LatentCodec::decode(const LatentGrid& z) const {
  Image img(z.channels(), z.height() * factor_, z.width() * factor_);
  for (int c = 0; c < z.channels(); ++c) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) img.at(c, y, x) = z.at(c, y / factor_, x / factor_);
    }
  }
  return img;
}

}  // namespace glyphguide
