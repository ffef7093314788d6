#include "glyphguide/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "glyphguide/font.hpp"

namespace glyphguide {

double CorpusRow::pitch() const {
  return (kGlyphCols + 1) * line_metrics(1e9, height, 1).scale;
}

FlatRect CorpusRow::rect(int n_chars) const {
  return FlatRect{static_cast<double>(x), static_cast<double>(y), n_chars * pitch(),
                  static_cast<double>(height)};
}

std::vector<std::string> cyclic_texts(int length) {
  const std::string& chars = BitmapFont::standard().inked_charset();
  const int n = static_cast<int>(chars.size());
  std::vector<std::string> texts;
  for (int j = 0; j < n; ++j) {
    std::string t;
    for (int k = 0; k < length; ++k) t += chars[(j + 7 * k) % n];
    texts.push_back(t);
  }
  return texts;
}

CorpusManifest default_corpus_manifest() {
  CorpusManifest m;
  for (int i = 0; i < 8; ++i) m.scenes.push_back("scene" + std::to_string(i));
  for (int y : {4, 32, 60, 88}) m.rows.push_back(CorpusRow{y, 4, 36, 5});
  return m;
}

SceneStyle make_scene(const std::string& id, std::uint64_t seed, int height, int width,
                      const LatentCodec& codec) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };
  std::array<double, 3> base{}, gx{}, gy{};
  for (int c = 0; c < 3; ++c) {
    base[c] = uni(0.1, 0.35);
    gx[c] = uni(-0.12, 0.12);
    gy[c] = uni(-0.12, 0.12);
  }
  const double freq = uni(2.0, 5.0);
  const double phase = uni(0.0, 6.0);
  SceneStyle s;
  s.id = id;
  for (int c = 0; c < 3; ++c) s.ink[c] = uni(0.8, 1.0);
  s.background = Image(3, height, width);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int y = 0; y < height; ++y) {
    const double ys = static_cast<double>(y) / height;
    for (int x = 0; x < width; ++x) {
      const double xs = static_cast<double>(x) / width;
      const double tex = 0.05 * std::sin(two_pi * freq * xs + phase) * std::cos(two_pi * freq * ys);
      for (int c = 0; c < 3; ++c) {
        s.background.at(c, y, x) = std::clamp(base[c] + gx[c] * xs + gy[c] * ys + tex, 0.0, 1.0);
      }
    }
  }
  s.background_latent = codec.encode(s.background);
  return s;
}

LatentGrid CorpusExemplar::latent() const {
  if (explicit_latent) return *explicit_latent;
  if (!style) throw ConditionError("corpus exemplar has neither a latent nor a style");
  LatentGrid z = style->background_latent;
  if (!glyph) return z;
  const auto g = glyph->plane(0);
  for (int c = 0; c < z.channels(); ++c) {
    auto p = z.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += (style->ink[c] - p[i]) * g[i];
  }
  return z;
}

FlatTextCorpus::FlatTextCorpus(std::vector<CorpusExemplar> exemplars, double tau)
    : exemplars_(std::move(exemplars)), tau_(tau) {
  if (!(tau > 0.0)) throw ConditionError("corpus kernel width tau must be positive");
  for (const auto& e : exemplars_) {
    const LatentGrid z = e.latent();
    if (channels_ == 0) {
      channels_ = z.channels();
      height_ = z.height();
      width_ = z.width();
    } else if (z.channels() != channels_ || z.height() != height_ || z.width() != width_) {
      throw ShapeError("corpus exemplars must share one latent shape");
    }
    if (e.glyph && (e.glyph->height() != height_ || e.glyph->width() != width_)) {
      throw ShapeError("exemplar glyph does not match the latent grid");
    }
  }
}

std::vector<std::size_t> FlatTextCorpus::subset(std::string_view scene_id) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < exemplars_.size(); ++i) {
    if (exemplars_[i].scene_id == scene_id) idx.push_back(i);
  }
  return idx;
}

std::vector<std::string> FlatTextCorpus::scene_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : exemplars_) {
    if (std::find(ids.begin(), ids.end(), e.scene_id) == ids.end()) ids.push_back(e.scene_id);
  }
  return ids;
}

FlatTextCorpus build_corpus(const CorpusManifest& m, const LatentCodec& codec) {
  if (m.scenes.empty() || m.rows.empty()) throw InputError("corpus manifest needs scenes and rows");
  if (m.image_height % codec.factor() != 0 || m.image_width % codec.factor() != 0) {
    throw ShapeError("corpus canvas is not divisible by the codec factor");
  }
  std::map<std::pair<int, std::string>, std::shared_ptr<const LatentGrid>> glyphs;
  std::vector<std::pair<int, std::string>> order;
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const CorpusRow& row = m.rows[r];
    const auto texts = m.texts.empty() ? cyclic_texts(row.slots) : m.texts;
    for (const auto& raw : texts) {
      const std::string text = normalize_text(raw);
      if (static_cast<int>(text.size()) > row.slots) {
        throw InputError("corpus text '" + text + "' exceeds the row's " + std::to_string(row.slots) +
                         " slots");
      }
      const FlatRect rect = row.rect(static_cast<int>(text.size()));
      if (rect.x + rect.width > m.image_width || rect.y + rect.height > m.image_height) {
        throw LayoutError("corpus row " + std::to_string(r) + " does not fit the canvas");
      }
      GlyphImage g(1, m.image_height, m.image_width);
      draw_text(g, rect, text);
      const auto key = std::make_pair(static_cast<int>(r), text);
      if (!glyphs.count(key)) {
        glyphs[key] = std::make_shared<const LatentGrid>(codec.encode_glyph(g, 1));
        order.push_back(key);
      }
    }
  }
  std::vector<CorpusExemplar> ex;
  for (std::size_t s = 0; s < m.scenes.size(); ++s) {
    auto style = std::make_shared<const SceneStyle>(
        make_scene(m.scenes[s], mix_seed(m.seed, s), m.image_height, m.image_width, codec));
    for (const auto& key : order) {
      CorpusExemplar e;
      e.scene_id = m.scenes[s];
      e.text = key.second;
      e.row = key.first;
      e.style = style;
      e.glyph = glyphs.at(key);
      ex.push_back(std::move(e));
    }
  }
  return FlatTextCorpus(std::move(ex), m.tau);
}

GmmPosterior gmm_posterior(const FlatTextCorpus& corpus, const LatentGrid& z_t, int t,
                           const NoiseSchedule& schedule, std::string_view scene_id) {
  const auto members = corpus.subset(scene_id);
  if (members.empty()) {
    throw ConditionError("no corpus exemplars for scene '" + std::string(scene_id) + "'");
  }
  if (t < 1 || t > schedule.steps) throw ScheduleError("gmm step outside the schedule");
  const double a = schedule.alpha_bar[t];
  const double sa = std::sqrt(a);
  const double tau = corpus.tau();
  const double var = 1.0 - a + a * tau * tau;

  std::vector<LatentGrid> latents;
  std::vector<double> lw;
  for (std::size_t i : members) {
    latents.push_back(corpus.exemplars()[i].latent());
    const LatentGrid& x = latents.back();
    if (!x.same_shape(z_t)) throw ShapeError("z_t does not match corpus latents");
    double d = 0.0;
    const auto zv = z_t.values();
    const auto xv = x.values();
    for (std::size_t k = 0; k < zv.size(); ++k) {
      const double r = zv[k] - sa * xv[k];
      d += r * r;
    }
    lw.push_back(-d / (2.0 * var));
  }
  const double mx = *std::max_element(lw.begin(), lw.end());
  double total = 0.0;
  for (double& v : lw) total += v = std::exp(v - mx);

  GmmPosterior post;
  post.weights.assign(corpus.exemplars().size(), 0.0);
  post.mean = LatentGrid(z_t.channels(), z_t.height(), z_t.width());
  auto mv = post.mean.values();
  for (std::size_t j = 0; j < members.size(); ++j) {
    const double w = lw[j] / total;
    post.weights[members[j]] = w;
    const auto xv = latents[j].values();
    for (std::size_t k = 0; k < mv.size(); ++k) mv[k] += w * xv[k];
  }
  return post;
}

LatentGrid gmm_epsilon(const FlatTextCorpus& corpus, const LatentGrid& z_t, int t,
                       const NoiseSchedule& schedule, const SceneCondition& cond) {
  const GmmPosterior post = gmm_posterior(corpus, z_t, t, schedule, cond.scene_id);
  const double a = schedule.alpha_bar[t];
  const double sa = std::sqrt(a);
  const double sb = std::sqrt(1.0 - a);
  LatentGrid eps = z_t;
  auto e = eps.values();
  const auto m = post.mean.values();
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = (e[k] - sa * m[k]) / sb;
  return eps;
}

void box_sum(std::span<const double> in, int height, int width, int radius, std::span<double> out) {
  if (radius < 0) {
    double total = 0.0;
    for (double v : in) total += v;
    std::fill(out.begin(), out.end(), total);
    return;
  }
  if (radius == 0) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const int w1 = width + 1;
  std::vector<double> integral(static_cast<std::size_t>(height + 1) * w1, 0.0);
  for (int y = 0; y < height; ++y) {
    double row = 0.0;
    for (int x = 0; x < width; ++x) {
      row += in[y * width + x];
      integral[(y + 1) * w1 + x + 1] = integral[y * w1 + x + 1] + row;
    }
  }
  for (int y = 0; y < height; ++y) {
    const int y0 = std::max(0, y - radius);
    const int y1 = std::min(height, y + radius + 1);
    for (int x = 0; x < width; ++x) {
      const int x0 = std::max(0, x - radius);
      const int x1 = std::min(width, x + radius + 1);
      out[y * width + x] = integral[y1 * w1 + x1] - integral[y0 * w1 + x1] -
                           integral[y1 * w1 + x0] + integral[y0 * w1 + x0];
    }
  }
}

VtgmDenoiser::VtgmDenoiser(const FlatTextCorpus& corpus, const NoiseSchedule& schedule,
                           const LatentCodec& codec, const VtgmParams& params,
                           const SceneCondition& cond)
    : corpus_(&corpus),
      schedule_(&schedule),
      params_(params),
      scene_id_(cond.scene_id),
      text_(cond.text),
      members_(corpus.subset(cond.scene_id)) {
  if (members_.empty()) {
    throw ConditionError("no corpus exemplars for scene '" + cond.scene_id + "'");
  }
  const int h = corpus.height();
  const int w = corpus.width();
  const std::size_t cells = static_cast<std::size_t>(h) * w;

  std::vector<double> g_cond(cells, 0.0);
  if (!cond.glyph.empty()) {
    const LatentGrid g = codec.encode_glyph(cond.glyph, 1);
    if (g.height() != h || g.width() != w) {
      throw ShapeError("condition glyph " + cond.glyph.shape_string() +
                       " does not encode to the corpus latent size");
    }
    std::copy(g.plane(0).begin(), g.plane(0).end(), g_cond.begin());
  }

  const auto& ex = corpus.exemplars();
  const SceneStyle* style = ex[members_.front()].style.get();
  factored_ = style != nullptr && corpus.channels() == 3;
  for (std::size_t i : members_) {
    if (ex[i].explicit_latent || ex[i].style.get() != style) factored_ = false;
  }
  if (factored_) {
    base_ = style->background_latent;
    delta_ = base_;
    for (int c = 0; c < 3; ++c) {
      for (double& v : delta_.plane(c)) v = style->ink[c] - v;
    }
    for (std::size_t i : members_) glyphs_.push_back(ex[i].glyph.get());
  } else {
    for (std::size_t i : members_) {
      latents_.push_back(ex[i].latent());
      glyphs_.push_back(ex[i].glyph.get());
    }
  }

  if (params_.condition_tau > 0.0) {
    prior_.assign(members_.size() * cells, 0.0);
    std::vector<double> diff(cells);
    const double scale = 1.0 / (2.0 * params_.condition_tau * params_.condition_tau);
    for (std::size_t j = 0; j < members_.size(); ++j) {
      for (std::size_t k = 0; k < cells; ++k) {
        const double gi = glyphs_[j] ? glyphs_[j]->plane(0)[k] : 0.0;
        diff[k] = (g_cond[k] - gi) * (g_cond[k] - gi);
      }
      std::span<double> out(prior_.data() + j * cells, cells);
      box_sum(diff, h, w, params_.condition_radius, out);
      for (double& v : out) v *= scale;
    }
  }
}

void VtgmDenoiser::log_weights(const LatentGrid& z, int t, std::vector<double>& lw) const {
  const int h = corpus_->height();
  const int w = corpus_->width();
  const std::size_t cells = static_cast<std::size_t>(h) * w;
  const double a = schedule_->alpha_bar[t];
  const double sa = std::sqrt(a);
  const double tau = corpus_->tau();
  const double inv_two_var = 1.0 / (2.0 * (1.0 - a + a * tau * tau));
  const std::size_t n = members_.size();
  lw.assign(n * cells, 0.0);
  std::vector<double> dist(cells);
  std::vector<double> summed(cells);

  // In the factored form ||z - sa x_i||^2 = R - 2 g_i (r.k) + g_i^2 (k.k) with
  // r = z - sa base, k = sa delta; R is shared by every exemplar and cancels.
  std::vector<double> rk, kk;
  if (factored_) {
    rk.assign(cells, 0.0);
    kk.assign(cells, 0.0);
    for (int c = 0; c < z.channels(); ++c) {
      const auto zc = z.plane(c);
      const auto bc = base_.plane(c);
      const auto dc = delta_.plane(c);
      for (std::size_t k = 0; k < cells; ++k) {
        const double r = zc[k] - sa * bc[k];
        const double kv = sa * dc[k];
        rk[k] += r * kv;
        kk[k] += kv * kv;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (factored_) {
      if (glyphs_[j]) {
        const auto g = glyphs_[j]->plane(0);
        for (std::size_t k = 0; k < cells; ++k) dist[k] = g[k] * (g[k] * kk[k] - 2.0 * rk[k]);
      } else {
        std::fill(dist.begin(), dist.end(), 0.0);
      }
    } else {
      std::fill(dist.begin(), dist.end(), 0.0);
      for (int c = 0; c < z.channels(); ++c) {
        const auto zc = z.plane(c);
        const auto xc = latents_[j].plane(c);
        for (std::size_t k = 0; k < cells; ++k) {
          const double r = zc[k] - sa * xc[k];
          dist[k] += r * r;
        }
      }
    }
    box_sum(dist, h, w, params_.likelihood_radius, summed);
    double* out = lw.data() + j * cells;
    for (std::size_t k = 0; k < cells; ++k) out[k] = -summed[k] * inv_two_var;
    if (!prior_.empty()) {
      const double* p = prior_.data() + j * cells;
      for (std::size_t k = 0; k < cells; ++k) out[k] -= p[k];
    }
  }
}

LatentGrid VtgmDenoiser::predict(const LatentGrid& z, int t) const {
  if (t < 1 || t > schedule_->steps) throw ScheduleError("denoiser step outside the schedule");
  if (z.channels() != corpus_->channels() || z.height() != corpus_->height() ||
      z.width() != corpus_->width()) {
    throw ShapeError("z_t " + z.shape_string() + " does not match corpus latents");
  }
  const std::size_t cells = z.plane_size();
  const std::size_t n = members_.size();
  std::vector<double> lw;
  log_weights(z, t, lw);

  std::vector<double> mx(cells, -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j) {
    const double* l = lw.data() + j * cells;
    for (std::size_t k = 0; k < cells; ++k) mx[k] = std::max(mx[k], l[k]);
  }
  std::vector<double> total(cells, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double* l = lw.data() + j * cells;
    for (std::size_t k = 0; k < cells; ++k) {
      const double d = l[k] - mx[k];
      l[k] = d < -60.0 ? 0.0 : std::exp(d);
      total[k] += l[k];
    }
  }

  if (factored_) {
    std::vector<double> gbar(cells, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!glyphs_[j]) continue;
      const double* l = lw.data() + j * cells;
      const auto g = glyphs_[j]->plane(0);
      for (std::size_t k = 0; k < cells; ++k) gbar[k] += l[k] * g[k];
    }
    LatentGrid x0 = base_;
    for (int c = 0; c < x0.channels(); ++c) {
      auto p = x0.plane(c);
      const auto d = delta_.plane(c);
      for (std::size_t k = 0; k < cells; ++k) p[k] += d[k] * (gbar[k] / total[k]);
    }
    return x0;
  }
  LatentGrid x0(z.channels(), z.height(), z.width());
  for (std::size_t j = 0; j < n; ++j) {
    const double* l = lw.data() + j * cells;
    for (int c = 0; c < z.channels(); ++c) {
      auto p = x0.plane(c);
      const auto xc = latents_[j].plane(c);
      for (std::size_t k = 0; k < cells; ++k) p[k] += l[k] * xc[k];
    }
  }
  for (int c = 0; c < z.channels(); ++c) {
    auto p = x0.plane(c);
    for (std::size_t k = 0; k < cells; ++k) p[k] /= total[k];
  }
  return x0;
}

LatentGrid VtgmDenoiser::epsilon(const LatentGrid& z, int t) const {
  const LatentGrid x0 = predict(z, t);
  const double a = schedule_->alpha_bar[t];
  const double sa = std::sqrt(a);
  const double sb = std::sqrt(1.0 - a);
  LatentGrid eps = z;
  auto e = eps.values();
  const auto m = x0.values();
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = (e[k] - sa * m[k]) / sb;
  return eps;
}

Denoiser VtgmDenoiser::as_denoiser() const {
  return [this](const LatentGrid& z, int t, const SceneCondition& cond) {
    if (cond.scene_id != scene_id_ || cond.text != text_) {
      throw ConditionError("denoiser was prepared for a different condition");
    }
    return epsilon(z, t);
  };
}

}  // namespace glyphguide
