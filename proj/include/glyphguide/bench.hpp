#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "glyphguide/font.hpp"
#include "glyphguide/geometry.hpp"
#include "glyphguide/glyph.hpp"
#include "glyphguide/grid.hpp"
#include "glyphguide/guidance.hpp"

namespace glyphguide {

enum class Tier { easy, medium, hard };

const char* tier_name(Tier t);
Tier tier_from_name(std::string_view name);
// Degrees: easy [0,30), medium [30,60), hard [60,90].
std::pair<double, double> tier_bounds(Tier t);
Tier tier_for_angle(double degrees);

struct BenchCase {
  std::string case_id;
  std::string scene_id;
  std::string text;
  PolygonMask mask;
  Tier tier = Tier::easy;
  double rotation_deg = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const BenchCase&, const BenchCase&) = default;
};

struct BaseLine {
  std::string text;
  PolygonMask mask;
};

// A flat source layout; lines of one spec are placed together and must not overlap.
struct BaseSpec {
  std::string scene_id;
  std::vector<BaseLine> lines;
};

std::vector<BaseSpec> default_base_specs();

std::vector<BenchCase> generate_benchmark(std::span<const BaseSpec> bases, int per_tier_count,
                                          std::uint64_t rng_seed, int canvas_height = 128,
                                          int canvas_width = 128);

inline constexpr char kUnknownChar = '?';
inline constexpr double kOcrThreshold = 0.3;

struct OcrResult {
  std::string decoded;
  std::vector<double> confidences;
};

// Template matching in each ground-truth cell. Multi-channel images are read as channel means.
OcrResult ocr_decode(const Image& img, std::span<const Quad> cells,
                     const BitmapFont& font = BitmapFont::standard());
OcrResult ocr_decode(const GlyphImage& img, std::span<const Quad> cells,
                     const BitmapFont& font = BitmapFont::standard());

int levenshtein(std::string_view a, std::string_view b);
double ned(std::string_view pred, std::string_view gt);
double sentence_accuracy(std::span<const std::pair<std::string, std::string>> pairs);

struct CaseRecord {
  std::string case_id;
  std::string scene_id;
  Tier tier = Tier::easy;
  double rotation_deg = 0.0;
  std::string gt;
  std::string pred;
  bool exact = false;
  double ned = 0.0;
  std::vector<double> confidences;
  std::string error;
};

struct TierSummary {
  std::string tier;  // "easy", "medium", "hard" or "total"
  int n = 0;
  double sen_acc = 0.0;
  double ned = 0.0;
};

struct BenchReport {
  std::string fingerprint;
  std::vector<TierSummary> tiers;  // only tiers with cases, in easy/medium/hard order
  TierSummary total;
  std::vector<CaseRecord> cases;   // sorted by case_id
};

BenchReport aggregate_report(std::vector<CaseRecord> records, std::string fingerprint);

struct RunBenchOptions {
  int jobs = 1;
  std::string out_dir;  // empty: nothing written
  bool save_images = false;
};

CaseRecord evaluate_case(const BenchCase& c, const GuidanceConfig& config, const GenerationContext& ctx,
                         const RunBenchOptions& options);
BenchReport run_bench(std::span<const BenchCase> cases, const GuidanceConfig& config,
                      const GenerationContext& ctx, const RunBenchOptions& options = {});

std::string report_csv(const BenchReport& report);

}  // namespace glyphguide
