#include "glyphguide/config.hpp"

#include <sstream>

#include "CLI11.hpp"
#include "glyphguide/image_io.hpp"

namespace glyphguide {

void RunConfig::validate() const {
  if (sampler.steps < 1) throw ConfigError("sampler.steps must be at least 1");
  if (!(sampler.beta_start > 0.0 && sampler.beta_start <= sampler.beta_end && sampler.beta_end < 1.0)) {
    throw ConfigError("sampler beta range must satisfy 0 < beta_start <= beta_end < 1");
  }
  if (!(sampler.eta >= 0.0)) throw ConfigError("sampler.eta must be non-negative");
  guidance.validate(sampler.steps);
  if (model.likelihood_radius < -1 || model.condition_radius < -1) {
    throw ConfigError("model radii must be >= -1");
  }
  if (!(corpus.tau > 0.0)) throw ConfigError("model.tau must be positive");
  if (corpus.factor < 1 || corpus.image_height <= 0 || corpus.image_width <= 0 ||
      corpus.image_height % corpus.factor != 0 || corpus.image_width % corpus.factor != 0) {
    throw ConfigError("canvas " + std::to_string(corpus.image_height) + "x" +
                      std::to_string(corpus.image_width) + " must be positive and divisible by factor " +
                      std::to_string(corpus.factor));
  }
  if (corpus.scenes.empty()) throw ConfigError("corpus needs at least one scene");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
}

Json RunConfig::to_json() const {
  return {{"guidance", glyphguide::to_json(guidance)},
          {"sampler",
           {{"steps", sampler.steps},
            {"beta_start", sampler.beta_start},
            {"beta_end", sampler.beta_end},
            {"eta", sampler.eta}}},
          {"model", glyphguide::to_json(model)},
          {"corpus", glyphguide::to_json(corpus)},
          {"run", {{"seed", seed}, {"jobs", jobs}, {"trace", trace}}}};
}

namespace {

std::string one(const CLI::ConfigItem& item) {
  if (item.inputs.size() != 1) throw ConfigError("'" + item.fullname() + "' expects a single value");
  return item.inputs.front();
}

double as_double(const CLI::ConfigItem& item) {
  const std::string s = one(item);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("'" + item.fullname() + "' is not a number: " + s);
  return v;
}

long long as_int(const CLI::ConfigItem& item) {
  const std::string s = one(item);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError("'" + item.fullname() + "' is not an integer: " + s);
  return v;
}

bool as_bool(const CLI::ConfigItem& item) {
  const std::string s = one(item);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("'" + item.fullname() + "' is not a boolean: " + s);
}

Interp as_interp(const CLI::ConfigItem& item) {
  const std::string s = one(item);
  if (s == "nearest") return Interp::nearest;
  if (s == "bilinear") return Interp::bilinear;
  throw ConfigError("'" + item.fullname() + "' must be nearest or bilinear");
}

}  // namespace

void apply_config_text(RunConfig& c, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError("cannot parse config '" + origin + "': " + e.what());
  }
  for (const auto& item : items) {
    const std::string key = item.fullname();
    if (item.name == "++" || item.name == "--") continue;  // section markers emitted by the parser
    if (key == "guidance.lambda") c.guidance.lambda = as_double(item);
    else if (key == "guidance.rho") c.guidance.rho = as_double(item);
    else if (key == "guidance.kappa_base") c.guidance.kappa_base = as_double(item);
    else if (key == "guidance.srb") c.guidance.use_srb = as_bool(item);
    else if (key == "guidance.sib") c.guidance.use_sib = as_bool(item);
    else if (key == "guidance.adain") c.guidance.use_adain = as_bool(item);
    else if (key == "guidance.interp") c.guidance.interp = as_interp(item);
    else if (key == "guidance.literal_zero_lambda") c.guidance.literal_zero_lambda = as_bool(item);
    else if (key == "guidance.refine_steps") {
      c.guidance.refine_steps.clear();
      for (const auto& v : item.inputs) {
        CLI::ConfigItem single{item.parents, item.name, {v}};
        c.guidance.refine_steps.push_back(static_cast<int>(as_int(single)));
      }
    }
    else if (key == "sampler.steps") c.sampler.steps = static_cast<int>(as_int(item));
    else if (key == "sampler.beta_start") c.sampler.beta_start = as_double(item);
    else if (key == "sampler.beta_end") c.sampler.beta_end = as_double(item);
    else if (key == "sampler.eta") c.sampler.eta = as_double(item);
    else if (key == "model.tau") c.corpus.tau = as_double(item);
    else if (key == "model.likelihood_radius") c.model.likelihood_radius = static_cast<int>(as_int(item));
    else if (key == "model.condition_radius") c.model.condition_radius = static_cast<int>(as_int(item));
    else if (key == "model.condition_tau") c.model.condition_tau = as_double(item);
    else if (key == "canvas.height") c.corpus.image_height = static_cast<int>(as_int(item));
    else if (key == "canvas.width") c.corpus.image_width = static_cast<int>(as_int(item));
    else if (key == "canvas.factor") c.corpus.factor = static_cast<int>(as_int(item));
    else if (key == "corpus.seed") c.corpus.seed = static_cast<std::uint64_t>(as_int(item));
    else if (key == "corpus.scenes") c.corpus.scenes = item.inputs;
    else if (key == "corpus.texts") c.corpus.texts = item.inputs;
    else if (key == "run.seed") c.seed = static_cast<std::uint64_t>(as_int(item));
    else if (key == "run.jobs") c.jobs = static_cast<int>(as_int(item));
    else if (key == "run.trace") c.trace = as_bool(item);
    else throw ConfigError("unknown config key '" + key + "' in '" + origin + "'");
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  apply_config_text(config, read_file(path), path);
}

Workspace::Workspace(const RunConfig& config) {
  config.validate();
  const LatentCodec codec(config.corpus.factor);
  corpus_ = std::make_unique<FlatTextCorpus>(build_corpus(config.corpus, codec));
  ctx_.corpus = corpus_.get();
  ctx_.schedule = linear_schedule(config.sampler.steps, config.sampler.beta_start, config.sampler.beta_end,
                                  config.sampler.eta);
  ctx_.codec = codec;
  ctx_.model = config.model;
  ctx_.image_height = config.corpus.image_height;
  ctx_.image_width = config.corpus.image_width;
}

}  // namespace glyphguide
