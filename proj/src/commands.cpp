#include "glyphguide/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "glyphguide/bench.hpp"
#include "glyphguide/config.hpp"
#include "glyphguide/font.hpp"
#include "glyphguide/glyph.hpp"
#include "glyphguide/image_io.hpp"

namespace glyphguide {
namespace {

namespace fs = std::filesystem;

struct SharedFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;
  std::optional<double> rho;
  bool no_srb = false;
  bool no_sib = false;
  bool no_adain = false;
  bool trace = false;
  std::optional<int> jobs;
  std::string out;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& f, bool out_required) {
  cmd->add_option("--config", f.config_path, "TOML-style config file");
  cmd->add_option("--seed", f.seed, "Run seed");
  cmd->add_option("--lambda", f.lambda, "Injection magnitude");
  cmd->add_option("--rho", f.rho, "Semantic vs structure balance");
  cmd->add_flag("--no-srb", f.no_srb, "Disable the semantic rectification branch");
  cmd->add_flag("--no-sib", f.no_sib, "Disable the structure injection branch");
  cmd->add_flag("--no-adain", f.no_adain, "Inject priors without AdaIN");
  cmd->add_flag("--trace", f.trace, "Dump per-step traces");
  cmd->add_option("--jobs", f.jobs, "Concurrent cases");
  auto* out = cmd->add_option("--out", f.out, "Output directory");
  if (out_required) out->required();
}

// Precedence: built-in defaults, then --config, then flags.
RunConfig resolve_config(const SharedFlags& f) {
  RunConfig c;
  if (!f.config_path.empty()) apply_config_file(c, f.config_path);
  if (f.seed) c.seed = *f.seed;
  if (f.lambda) c.guidance.lambda = *f.lambda;
  if (f.rho) c.guidance.rho = *f.rho;
  if (f.no_srb) c.guidance.use_srb = false;
  if (f.no_sib) c.guidance.use_sib = false;
  if (f.no_adain) c.guidance.use_adain = false;
  if (f.trace) c.trace = true;
  if (f.jobs) c.jobs = *f.jobs;
  c.validate();
  return c;
}

std::string join(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

void write_run_config(const fs::path& dir, const RunConfig& config, const Json& inputs) {
  Json j = config.to_json();
  j["inputs"] = inputs;
  write_file(join(dir, "run_config.json"), dump_json(j));
}

std::string require_text(const std::string& raw) {
  std::string text = normalize_text(raw);
  if (text.find_first_not_of(' ') == std::string::npos) throw InputError("text must contain at least one character");
  return text;
}

PolygonMask load_mask(const std::string& path) {
  if (!fs::exists(path)) throw InputError("mask file not found: " + path);
  try {
    return polygon_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    throw InputError("malformed mask file '" + path + "': " + e.what());
  }
}

void say(const std::string& path) { std::cout << path << '\n'; }

struct GenerateArgs {
  std::string scene;
  std::string mask;
  std::string text;
};

int cmd_generate(const GenerateArgs& a, const SharedFlags& f) {
  const RunConfig config = resolve_config(f);
  const std::string text = require_text(a.text);
  const PolygonMask mask = load_mask(a.mask);
  if (std::find(config.corpus.scenes.begin(), config.corpus.scenes.end(), a.scene) == config.corpus.scenes.end()) {
    throw InputError("unknown scene '" + a.scene + "'");
  }
  const Workspace ws(config);
  const GenerationRequest req{a.scene, mask, text, config.seed};
  const GenerationResult r = stgen_generate(ws.context(), req, config.guidance, {config.trace});

  const fs::path dir(f.out);
  write_ppm(join(dir, "image.ppm"), r.image);
  write_pgm(join(dir, "glyph.pgm"), r.glyph);
  write_pgm(join(dir, "flat_glyph.pgm"), r.flat_glyph);
  Json segments = Json::array();
  for (const auto& s : r.segments) segments.push_back(to_json(s));
  write_file(join(dir, "layout.json"), dump_json({{"segments", segments}, {"flat_layout", to_json(r.flat)}}));
  write_run_config(dir, config, {{"command", "generate"}, {"scene", a.scene}, {"mask", to_json(mask)}, {"text", text}});
  for (const char* name : {"image.ppm", "layout.json", "glyph.pgm", "flat_glyph.pgm", "run_config.json"}) {
    say(join(dir, name));
  }

  if (config.trace) {
    const fs::path tdir = dir / "trace";
    const int steps = ws.context().schedule.steps;
    Json frames = Json::array();
    for (std::size_t i = 0; i < r.x0_trace.size(); ++i) {
      const int t = steps - static_cast<int>(i);
      char name[32];
      std::snprintf(name, sizeof name, "x0_t%02d.ppm", t);
      write_ppm(join(tdir, name), ws.context().codec.decode(r.x0_trace[i]));
      frames.push_back({{"t", t}, {"file", name}});
    }
    write_file(join(tdir, "index.json"), dump_json({{"steps", steps}, {"frames", frames}}));
    Json gt = Json::array();
    for (const auto& e : r.guidance_trace) gt.push_back(to_json(e));
    write_file(join(tdir, "guidance_trace.json"), dump_json(gt));
    say(tdir.string());
  }
  return kExitOk;
}

struct DecomposeArgs {
  std::string mask;
  std::string text;
};

int cmd_decompose(const DecomposeArgs& a, const SharedFlags& f) {
  const RunConfig config = resolve_config(f);
  const std::string text = require_text(a.text);
  const PolygonMask mask = load_mask(a.mask);
  const Decomposition d = decompose_mask(mask, text);
  const int h = config.corpus.image_height, w = config.corpus.image_width;
  const FlatLayout flat = flatten_segments(d.segments, h, w);

  const fs::path dir(f.out);
  write_file(join(dir, "segments.json"), dump_json(to_json(d)));
  write_file(join(dir, "flat_layout.json"), dump_json(to_json(flat)));
  write_pgm(join(dir, "glyph.pgm"), render_glyph_image(d.segments, text, h, w));
  write_pgm(join(dir, "flat_glyph.pgm"), render_flat_glyph(flat, text, h, w));
  write_run_config(dir, config, {{"command", "decompose"}, {"mask", to_json(mask)}, {"text", text}});

  std::cout << "segments: " << d.segments.size() << '\n';
  for (const auto& s : d.segments) {
    char line[128];
    std::snprintf(line, sizeof line, "  #%d chars [%d,%d) angle %.4f deg", s.index, s.text_slice.begin,
                  s.text_slice.end, s.angle * 180.0 / 3.14159265358979323846);
    std::cout << line << '\n';
  }
  for (const char* name : {"segments.json", "flat_layout.json", "glyph.pgm", "flat_glyph.pgm", "run_config.json"}) {
    say(join(dir, name));
  }
  return kExitOk;
}

struct BenchGenArgs {
  std::string spec;
  int per_tier = 10;
};

int cmd_bench_gen(const BenchGenArgs& a, const SharedFlags& f) {
  const RunConfig config = resolve_config(f);
  if (a.per_tier < 1) throw InputError("--per-tier must be at least 1");
  std::vector<BaseSpec> bases;
  if (a.spec.empty()) {
    bases = default_base_specs();
  } else {
    if (!fs::exists(a.spec)) throw InputError("spec file not found: " + a.spec);
    const Json j = read_json_file(a.spec);
    if (!j.is_array()) throw InputError("spec file must hold a JSON array of bases");
    for (const auto& b : j) bases.push_back(base_spec_from_json(b));
  }
  const auto cases =
      generate_benchmark(bases, a.per_tier, config.seed, config.corpus.image_height, config.corpus.image_width);
  const fs::path dir(f.out);
  write_file(join(dir, "manifest.json"), dump_json(manifest_to_json(cases)));
  write_run_config(dir, config,
                   {{"command", "bench-gen"}, {"spec", a.spec.empty() ? "default" : a.spec}, {"per_tier", a.per_tier}});
  say(join(dir, "manifest.json"));
  say(join(dir, "run_config.json"));
  return kExitOk;
}

struct BenchRunArgs {
  std::string manifest;
  bool save_images = false;
};

int cmd_bench_run(const BenchRunArgs& a, const SharedFlags& f) {
  const RunConfig config = resolve_config(f);
  if (!fs::exists(a.manifest)) throw InputError("manifest not found: " + a.manifest);
  std::vector<BenchCase> cases;
  try {
    cases = manifest_from_json(read_json_file(a.manifest));
  } catch (const Json::exception& e) {
    throw InputError("malformed manifest '" + a.manifest + "': " + e.what());
  }
  const Workspace ws(config);
  for (const auto& c : cases) {
    if (std::find(config.corpus.scenes.begin(), config.corpus.scenes.end(), c.scene_id) ==
        config.corpus.scenes.end()) {
      throw InputError("case " + c.case_id + " uses unknown scene '" + c.scene_id + "'");
    }
  }
  RunBenchOptions opts;
  opts.jobs = config.jobs;
  opts.out_dir = f.out;
  opts.save_images = a.save_images;
  const BenchReport report = run_bench(cases, config.guidance, ws.context(), opts);
  const fs::path dir(f.out);
  write_run_config(dir, config,
                   {{"command", "bench-run"}, {"manifest", a.manifest}, {"save_images", a.save_images}});
  std::cout << report_csv(report);
  say(join(dir, "report.json"));
  say(join(dir, "report.csv"));
  say(join(dir, "run_config.json"));
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> reports;
  std::vector<std::string> labels;
  std::string csv_out;
};

std::string default_label(const std::string& path) {
  const fs::path p(path);
  const std::string parent = p.parent_path().filename().string();
  return parent.empty() ? p.stem().string() : parent;
}

int cmd_report(const ReportArgs& a) {
  if (!a.labels.empty() && a.labels.size() != a.reports.size()) {
    throw InputError("--label must be given once per report");
  }
  std::vector<BenchReport> reports;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    if (!fs::exists(a.reports[i])) throw InputError("report not found: " + a.reports[i]);
    reports.push_back(report_from_json(read_json_file(a.reports[i])));
    labels.push_back(a.labels.empty() ? default_label(a.reports[i]) : a.labels[i]);
  }

  auto row_of = [](const BenchReport& r, std::size_t row) -> const TierSummary& {
    return row < 3 ? r.tiers[row] : r.total;
  };
  const char* row_names[] = {"easy", "medium", "hard", "total"};

  std::ostringstream table, csv;
  char cell[64];
  table << "tier    ";
  csv << "tier";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::snprintf(cell, sizeof cell, " | %18s", labels[i].c_str());
    table << cell;
    csv << ',' << labels[i] << "_sen_acc," << labels[i] << "_ned";
  }
  for (std::size_t i = 1; i < reports.size(); ++i) {
    std::snprintf(cell, sizeof cell, " | %18s", ("d " + labels[i]).c_str());
    table << cell;
    csv << ",delta_" << labels[i] << "_sen_acc,delta_" << labels[i] << "_ned";
  }
  table << "\n        ";
  for (std::size_t i = 0; i < 2 * reports.size() - 1; ++i) table << " |  Sen.Acc      NED";
  table << '\n';
  csv << '\n';

  for (std::size_t row = 0; row < 4; ++row) {
    std::snprintf(cell, sizeof cell, "%-8s", row_names[row]);
    table << cell;
    csv << row_names[row];
    for (const auto& r : reports) {
      const TierSummary& s = row_of(r, row);
      std::snprintf(cell, sizeof cell, " | %8.2f %8.4f", 100.0 * s.sen_acc, s.ned);
      table << cell;
      std::snprintf(cell, sizeof cell, ",%.4f,%.4f", s.sen_acc, s.ned);
      csv << cell;
    }
    for (std::size_t i = 1; i < reports.size(); ++i) {
      const TierSummary& s = row_of(reports[i], row);
      const TierSummary& b = row_of(reports[0], row);
      std::snprintf(cell, sizeof cell, " | %+8.2f %+8.4f", 100.0 * (s.sen_acc - b.sen_acc), s.ned - b.ned);
      table << cell;
      std::snprintf(cell, sizeof cell, ",%.4f,%.4f", s.sen_acc - b.sen_acc, s.ned - b.ned);
      csv << cell;
    }
    table << '\n';
    csv << '\n';
  }
  std::cout << table.str() << '\n' << csv.str();
  if (!a.csv_out.empty()) {
    write_file(a.csv_out, csv.str());
    say(a.csv_out);
  }
  return kExitOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
  } catch (const LayoutError& e) {
    std::cerr << "layout error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Slanted and curved scene text generation with glyph guidance"};
  app.require_subcommand(1);

  SharedFlags gen_flags, dec_flags, bgen_flags, brun_flags;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate an image with text placed in a mask");
  generate->add_option("--scene,--prompt", gen.scene, "Scene id from the corpus")->required();
  generate->add_option("--mask", gen.mask, "Polygon mask JSON")->required();
  generate->add_option("--text", gen.text, "Text to render")->required();
  add_shared_flags(generate, gen_flags, true);

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Split a mask into straight quad segments");
  decompose->add_option("--mask", dec.mask, "Polygon mask JSON")->required();
  decompose->add_option("--text", dec.text, "Text to lay out")->required();
  add_shared_flags(decompose, dec_flags, true);

  BenchGenArgs bgen;
  auto* bench_gen = app.add_subcommand("bench-gen", "Generate a rotated benchmark manifest");
  bench_gen->add_option("--spec", bgen.spec, "JSON array of base layouts (default: built-in bases)");
  bench_gen->add_option("--per-tier", bgen.per_tier, "Cases per tier");
  add_shared_flags(bench_gen, bgen_flags, true);

  BenchRunArgs brun;
  auto* bench_run = app.add_subcommand("bench-run", "Run a benchmark manifest and write a report");
  bench_run->add_option("--manifest", brun.manifest, "Manifest JSON from bench-gen")->required();
  bench_run->add_flag("--save-images", brun.save_images, "Keep every generated image");
  add_shared_flags(bench_run, brun_flags, true);

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Compare report.json files per tier");
  report->add_option("reports", rep.reports, "report.json paths")->required();
  report->add_option("--label", rep.labels, "Column label per report");
  report->add_option("--out", rep.csv_out, "Write the comparison CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (generate->parsed()) return guarded([&] { return cmd_generate(gen, gen_flags); });
  if (decompose->parsed()) return guarded([&] { return cmd_decompose(dec, dec_flags); });
  if (bench_gen->parsed()) return guarded([&] { return cmd_bench_gen(bgen, bgen_flags); });
  if (bench_run->parsed()) return guarded([&] { return cmd_bench_run(brun, brun_flags); });
  return guarded([&] { return cmd_report(rep); });
}

}  // namespace glyphguide
