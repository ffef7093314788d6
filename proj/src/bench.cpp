#include "glyphguide/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <thread>

#include "glyphguide/image_io.hpp"
#include "glyphguide/rng.hpp"
#include "glyphguide/serialize.hpp"

namespace glyphguide {

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::easy: return "easy";
    case Tier::medium: return "medium";
    case Tier::hard: return "hard";
  }
  return "easy";
}

Tier tier_from_name(std::string_view name) {
  if (name == "easy") return Tier::easy;
  if (name == "medium") return Tier::medium;
  if (name == "hard") return Tier::hard;
  throw InputError("unknown tier '" + std::string(name) + "'");
}

std::pair<double, double> tier_bounds(Tier t) {
  switch (t) {
    case Tier::easy: return {0.0, 30.0};
    case Tier::medium: return {30.0, 60.0};
    case Tier::hard: return {60.0, 90.0};
  }
  return {0.0, 30.0};
}

Tier tier_for_angle(double degrees) {
  if (!(degrees >= 0.0 && degrees <= 90.0)) {
    throw InputError("rotation " + std::to_string(degrees) + " is outside [0, 90]");
  }
  if (degrees < 30.0) return Tier::easy;
  if (degrees < 60.0) return Tier::medium;
  return Tier::hard;
}

std::vector<BaseSpec> default_base_specs() {
  struct Line {
    int row, slot;
    const char* text;
  };
  // Lines sit on the corpus rows (y = 4 + 28 r) and slots (x = 4 + 24 k).
  const std::vector<std::vector<Line>> layouts = {
      {{0, 0, "CAT"}},   {{1, 1, "DOG"}},   {{2, 2, "SUN"}},   {{3, 0, "MAP"}},
      {{1, 0, "BOX"}},   {{2, 1, "KEY"}},   {{3, 2, "FOX"}},   {{0, 1, "JAR"}},
      {{0, 0, "HELLO"}}, {{1, 0, "PIZZA"}}, {{2, 0, "RIVER"}}, {{3, 0, "QUIZ7"}},
      {{1, 0, "ZEBRA"}}, {{2, 0, "JUMP8"}}, {{0, 0, "WORLD"}}, {{3, 0, "BLOCK"}},
      {{0, 0, "UP"}, {3, 3, "NO"}},         {{0, 0, "TAX"}, {3, 3, "GO"}},
  };
  std::vector<BaseSpec> specs;
  int scene = 0;
  for (const auto& lines : layouts) {
    BaseSpec b;
    b.scene_id = "scene" + std::to_string(scene++ % 8);
    for (const Line& l : lines) {
      const double len = std::char_traits<char>::length(l.text);
      b.lines.push_back({l.text, rect_polygon(4.0 + 24.0 * l.slot, 4.0 + 28.0 * l.row, 24.0 * len, 36.0)});
    }
    specs.push_back(std::move(b));
  }
  return specs;
}

namespace {

std::optional<PolygonMask> place_inside(const PolygonMask& poly, int canvas_h, int canvas_w) {
  double minx = poly.vertices()[0].x, maxx = minx, miny = poly.vertices()[0].y, maxy = miny;
  for (const Vec2& p : poly.vertices()) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  if (maxx - minx > canvas_w || maxy - miny > canvas_h) return std::nullopt;
  const double dx = std::max(0.0, -minx) - std::max(0.0, maxx - canvas_w);
  const double dy = std::max(0.0, -miny) - std::max(0.0, maxy - canvas_h);
  if (dx == 0.0 && dy == 0.0) return poly;
  return translate_polygon(poly, {dx, dy});
}

std::string case_id(Tier t, int k, int line, int lines) {
  char buf[48];
  if (lines > 1) {
    std::snprintf(buf, sizeof buf, "%s-%03d-%d", tier_name(t), k, line);
  } else {
    std::snprintf(buf, sizeof buf, "%s-%03d", tier_name(t), k);
  }
  return buf;
}

}  // namespace

std::vector<BenchCase> generate_benchmark(std::span<const BaseSpec> bases, int per_tier_count,
                                          std::uint64_t rng_seed, int canvas_height, int canvas_width) {
  if (per_tier_count < 1) throw InputError("per-tier case count must be at least 1");
  if (bases.empty()) throw InputError("benchmark needs at least one base spec");
  std::mt19937_64 rng(mix_seed(rng_seed, 0));
  std::vector<BenchCase> cases;
  for (Tier tier : {Tier::easy, Tier::medium, Tier::hard}) {
    const auto [lo, hi] = tier_bounds(tier);
    int produced = 0;
    for (int k = 0; produced < per_tier_count; ++k) {
      const int remaining = per_tier_count - produced;
      const BaseSpec* pick = nullptr;
      for (int draw = 0; draw < 1000 && pick == nullptr; ++draw) {
        const BaseSpec& b = bases[rng() % bases.size()];
        if (static_cast<int>(b.lines.size()) <= remaining) pick = &b;
      }
      if (pick == nullptr) {
        throw LayoutError("no base spec has at most " + std::to_string(remaining) + " lines to finish tier " +
                          tier_name(tier));
      }
      const BaseSpec& base = *pick;
      std::vector<PolygonMask> placed;
      std::vector<double> angles;
      for (const BaseLine& line : base.lines) {
        bool ok = false;
        for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
          const double deg = lo + (hi - lo) * uniform01(rng);
          const PolygonMask turned =
              rotate_polygon(line.mask, deg * std::numbers::pi / 180.0, line.mask.centroid());
          const auto inside = place_inside(turned, canvas_height, canvas_width);
          if (!inside) continue;
          const bool clash = std::any_of(placed.begin(), placed.end(),
                                         [&](const PolygonMask& p) { return polygons_overlap(p, *inside); });
          if (clash) continue;
          placed.push_back(*inside);
          angles.push_back(deg);
          ok = true;
        }
        if (!ok) {
          throw LayoutError("could not place '" + line.text + "' for tier " + tier_name(tier) +
                            " without overlap after 100 attempts");
        }
      }
      const int n = static_cast<int>(base.lines.size());
      for (int i = 0; i < n; ++i) {
        BenchCase c;
        c.case_id = case_id(tier, k, i, n);
        c.scene_id = base.scene_id;
        c.text = normalize_text(base.lines[i].text);
        c.mask = placed[i];
        c.tier = tier;
        c.rotation_deg = angles[i];
        c.seed = rng() >> 16;
        cases.push_back(std::move(c));
      }
      produced += n;
    }
  }
  return cases;
}

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double ned(std::string_view pred, std::string_view gt) {
  if (gt.empty()) throw InputError("ned needs a non-empty ground truth");
  const double longest = static_cast<double>(std::max(pred.size(), gt.size()));
  return 1.0 - levenshtein(pred, gt) / longest;
}

double sentence_accuracy(std::span<const std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) throw InputError("sentence accuracy of an empty list");
  std::size_t hits = 0;
  for (const auto& [pred, gt] : pairs) hits += pred == gt ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

BenchReport aggregate_report(std::vector<CaseRecord> records, std::string fingerprint) {
  std::sort(records.begin(), records.end(),
            [](const CaseRecord& a, const CaseRecord& b) { return a.case_id < b.case_id; });
  BenchReport r;
  r.fingerprint = std::move(fingerprint);
  auto summarize = [&](const std::string& name, auto keep) {
    TierSummary s{name, 0, 0.0, 0.0};
    std::size_t hits = 0;
    for (const auto& c : records) {
      if (!keep(c)) continue;
      ++s.n;
      hits += c.exact ? 1 : 0;
      s.ned += c.ned;
    }
    if (s.n > 0) {
      s.sen_acc = static_cast<double>(hits) / s.n;
      s.ned /= s.n;
    }
    return s;
  };
  for (Tier t : {Tier::easy, Tier::medium, Tier::hard}) {
    TierSummary s = summarize(tier_name(t), [t](const CaseRecord& c) { return c.tier == t; });
    if (s.n > 0) r.tiers.push_back(s);
  }
  r.total = summarize("total", [](const CaseRecord&) { return true; });
  r.cases = std::move(records);
  return r;
}

CaseRecord evaluate_case(const BenchCase& c, const GuidanceConfig& config, const GenerationContext& ctx,
                         const RunBenchOptions& options) {
  CaseRecord rec;
  rec.case_id = c.case_id;
  rec.scene_id = c.scene_id;
  rec.tier = c.tier;
  rec.rotation_deg = c.rotation_deg;
  rec.gt = c.text;
  try {
    const GenerationRequest req{c.scene_id, c.mask, c.text, c.seed};
    const GenerationResult res =
        config.active() ? stgen_generate(ctx, req, config) : unguided_generate(ctx, req);
    const std::vector<Quad> cells = char_cells(res.segments, c.text);
    const OcrResult ocr = ocr_decode(res.image, cells);
    rec.pred = ocr.decoded;
    rec.confidences = ocr.confidences;
    rec.exact = rec.pred == rec.gt;
    rec.ned = ned(rec.pred, rec.gt);
    if (options.save_images && !options.out_dir.empty()) {
      write_ppm(options.out_dir + "/" + c.case_id + "/output.ppm", res.image);
    }
  } catch (const std::exception& e) {
    rec.pred.clear();
    rec.exact = false;
    rec.ned = 0.0;
    rec.error = e.what();
  }
  return rec;
}

BenchReport run_bench(std::span<const BenchCase> cases, const GuidanceConfig& config,
                      const GenerationContext& ctx, const RunBenchOptions& options) {
  config.validate(ctx.schedule.steps);
  std::vector<CaseRecord> records(cases.size());
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(cases.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      records[i] = evaluate_case(cases[i], config, ctx, options);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  const Json fp = {{"guidance", to_json(config)},
                   {"model", to_json(ctx.model)},
                   {"alpha_bar", ctx.schedule.alpha_bar},
                   {"eta", ctx.schedule.eta},
                   {"tau", ctx.corpus->tau()},
                   {"canvas", Json::array({ctx.image_height, ctx.image_width, ctx.codec.factor()})}};
  BenchReport report = aggregate_report(std::move(records), fnv1a_hex(fp.dump()));
  if (!options.out_dir.empty()) {
    write_file(options.out_dir + "/report.json", dump_json(to_json(report)));
    write_file(options.out_dir + "/report.csv", report_csv(report));
  }
  return report;
}

std::string report_csv(const BenchReport& report) {
  std::string out = "tier,n,sen_acc,ned\n";
  char buf[96];
  auto row = [&](const TierSummary& s) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.4f,%.4f\n", s.tier.c_str(), s.n, s.sen_acc, s.ned);
    out += buf;
  };
  for (const auto& t : report.tiers) row(t);
  row(report.total);
  return out;
}

}  // namespace glyphguide
