#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "glyphguide/corpus.hpp"
#include "glyphguide/guidance.hpp"
#include "glyphguide/serialize.hpp"

namespace glyphguide {

struct SamplerSettings {
  int steps = 20;
  double beta_start = 1e-3;
  double beta_end = 0.15;
  double eta = 0.0;
};

// Everything a command needs, resolved from defaults, an optional config
// file, then command-line flags (later sources win).
struct RunConfig {
  GuidanceConfig guidance;
  SamplerSettings sampler;
  VtgmParams model;
  CorpusManifest corpus = default_corpus_manifest();
  std::uint64_t seed = 0;
  int jobs = 1;
  bool trace = false;

  void validate() const;
  Json to_json() const;
};

// Applies a TOML-style document with [guidance], [sampler], [model],
// [canvas], [corpus] and [run] sections. Unknown keys are errors.
void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin);
void apply_config_file(RunConfig& config, const std::string& path);

// Owns the corpus so a GenerationContext can point into it.
class Workspace {
 public:
  explicit Workspace(const RunConfig& config);
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const GenerationContext& context() const { return ctx_; }
  const FlatTextCorpus& corpus() const { return *corpus_; }

 private:
  std::unique_ptr<FlatTextCorpus> corpus_;
  GenerationContext ctx_;
};

}  // namespace glyphguide
