#include "glyphguide/serialize.hpp"

#include <cstdio>

#include "glyphguide/image_io.hpp"

namespace glyphguide {

namespace {

const char* interp_name(Interp i) { return i == Interp::nearest ? "nearest" : "bilinear"; }

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(Vec2 p) { return Json::array({p.x, p.y}); }

Json to_json(const Quad& q) {
  Json a = Json::array();
  for (const Vec2& p : q.corners) a.push_back(to_json(p));
  return a;
}

Json to_json(const PolygonMask& poly) {
  Json a = Json::array();
  for (const Vec2& p : poly.vertices()) a.push_back(to_json(p));
  return a;
}

Json to_json(const BezierCurve& c) {
  Json a = Json::array();
  for (const Vec2& p : c.control) a.push_back(to_json(p));
  return a;
}

Json to_json(const OrientedRect& r) {
  return {{"center", to_json(r.center)},
          {"length", r.length},
          {"thickness", r.thickness},
          {"angle", r.angle},
          {"corners", Json::array({to_json(r.corners()[0]), to_json(r.corners()[1]),
                                   to_json(r.corners()[2]), to_json(r.corners()[3])})}};
}

Json to_json(const QuadSegment& s) {
  return {{"corners", to_json(s.quad)},
          {"angle", s.angle},
          {"angle_deg", s.angle * 180.0 / 3.14159265358979323846},
          {"index", s.index},
          {"text_slice", Json::array({s.text_slice.begin, s.text_slice.end})}};
}

Json to_json(const FlatLayout& layout) {
  Json rects = Json::array();
  for (std::size_t i = 0; i < layout.rects.size(); ++i) {
    const FlatRect& r = layout.rects[i];
    const RigidTransform& t = layout.transforms[i];
    rects.push_back({{"x", r.x},
                     {"y", r.y},
                     {"width", r.width},
                     {"height", r.height},
                     {"text_slice", Json::array({layout.slices[i].begin, layout.slices[i].end})},
                     {"transform",
                      {{"angle", t.angle}, {"scale", t.scale}, {"translation", to_json(t.translation)}}}});
  }
  return {{"canvas", Json::array({layout.canvas_height, layout.canvas_width})}, {"rects", rects}};
}

Json to_json(const Decomposition& d) {
  Json segs = Json::array();
  for (const auto& s : d.segments) segs.push_back(to_json(s));
  return {{"upper", to_json(d.upper)},   {"lower", to_json(d.lower)},
          {"baseline", to_json(d.base)}, {"min_rect", to_json(d.rect)},
          {"split_u", d.split_u},        {"boundaries", d.boundaries},
          {"segments", segs}};
}

Json to_json(const BenchCase& c) {
  return {{"case_id", c.case_id}, {"scene_id", c.scene_id},         {"text", c.text},
          {"mask", to_json(c.mask)}, {"tier", tier_name(c.tier)}, {"rotation_deg", c.rotation_deg},
          {"seed", c.seed}};
}

Json to_json(const BaseSpec& b) {
  Json lines = Json::array();
  for (const auto& l : b.lines) lines.push_back({{"text", l.text}, {"mask", to_json(l.mask)}});
  return {{"scene_id", b.scene_id}, {"lines", lines}};
}

Json to_json(const CaseRecord& r) {
  return {{"case_id", r.case_id}, {"scene_id", r.scene_id}, {"tier", tier_name(r.tier)},
          {"rotation_deg", r.rotation_deg}, {"gt", r.gt}, {"pred", r.pred},
          {"exact", r.exact}, {"ned", r.ned}, {"confidences", r.confidences}, {"error", r.error}};
}

Json to_json(const TierSummary& s) {
  return {{"tier", s.tier}, {"n", s.n}, {"sen_acc", s.sen_acc}, {"ned", s.ned}};
}

Json to_json(const BenchReport& r) {
  Json tiers = Json::array();
  for (const auto& t : r.tiers) tiers.push_back(to_json(t));
  Json cases = Json::array();
  for (const auto& c : r.cases) cases.push_back(to_json(c));
  return {{"fingerprint", r.fingerprint}, {"tiers", tiers}, {"total", to_json(r.total)}, {"cases", cases}};
}

Json to_json(const GuidanceConfig& g) {
  return {{"lambda", g.lambda},
          {"rho", g.rho},
          {"kappa_base", g.kappa_base},
          {"refine_steps", g.refine_steps},
          {"srb", g.use_srb},
          {"sib", g.use_sib},
          {"adain", g.use_adain},
          {"interp", interp_name(g.interp)},
          {"literal_zero_lambda", g.literal_zero_lambda}};
}

Json to_json(const VtgmParams& p) {
  return {{"likelihood_radius", p.likelihood_radius},
          {"condition_radius", p.condition_radius},
          {"condition_tau", p.condition_tau}};
}

Json to_json(const CorpusManifest& m) {
  Json rows = Json::array();
  for (const auto& r : m.rows) rows.push_back({{"y", r.y}, {"x", r.x}, {"height", r.height}, {"slots", r.slots}});
  return {{"seed", m.seed},   {"image_height", m.image_height}, {"image_width", m.image_width},
          {"factor", m.factor}, {"tau", m.tau},                 {"scenes", m.scenes},
          {"texts", m.texts}, {"rows", rows}};
}

Json to_json(const GuidanceTraceEntry& e) {
  return {{"t", e.t}, {"kappa", e.kappa}, {"srb", e.srb}, {"sib", e.sib}, {"masked_delta", e.masked_delta}};
}

Vec2 vec2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError("point must be a [x, y] number pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

PolygonMask polygon_from_json(const Json& j) {
  const Json& arr = j.is_object() ? j.at("mask") : j;
  if (!arr.is_array()) throw InputError("mask must be an array of [x, y] points");
  std::vector<Vec2> pts;
  for (const auto& p : arr) pts.push_back(vec2_from_json(p));
  try {
    return PolygonMask(std::move(pts));
  } catch (const GeometryError& e) {
    throw InputError(std::string("invalid mask: ") + e.what());
  }
}

QuadSegment segment_from_json(const Json& j) {
  QuadSegment s;
  const Json& c = j.at("corners");
  for (int i = 0; i < 4; ++i) s.quad.corners[i] = vec2_from_json(c.at(i));
  s.angle = field<double>(j, "angle");
  s.index = field<int>(j, "index");
  const auto sl = field<std::vector<int>>(j, "text_slice");
  if (sl.size() != 2) throw InputError("text_slice must be [begin, end]");
  s.text_slice = {sl[0], sl[1]};
  return s;
}

BenchCase case_from_json(const Json& j) {
  BenchCase c;
  c.case_id = field<std::string>(j, "case_id");
  c.scene_id = field<std::string>(j, "scene_id");
  c.text = field<std::string>(j, "text");
  c.mask = polygon_from_json(j.at("mask"));
  c.tier = tier_from_name(field<std::string>(j, "tier"));
  c.rotation_deg = field<double>(j, "rotation_deg");
  c.seed = field<std::uint64_t>(j, "seed");
  return c;
}

BaseSpec base_spec_from_json(const Json& j) {
  BaseSpec b;
  b.scene_id = field<std::string>(j, "scene_id");
  for (const auto& l : j.at("lines")) b.lines.push_back({field<std::string>(l, "text"), polygon_from_json(l.at("mask"))});
  if (b.lines.empty()) throw InputError("base spec needs at least one line");
  return b;
}

CaseRecord record_from_json(const Json& j) {
  CaseRecord r;
  r.case_id = field<std::string>(j, "case_id");
  r.scene_id = field<std::string>(j, "scene_id");
  r.tier = tier_from_name(field<std::string>(j, "tier"));
  r.rotation_deg = field<double>(j, "rotation_deg");
  r.gt = field<std::string>(j, "gt");
  r.pred = field<std::string>(j, "pred");
  r.exact = field<bool>(j, "exact");
  r.ned = field<double>(j, "ned");
  r.confidences = field<std::vector<double>>(j, "confidences");
  r.error = field<std::string>(j, "error");
  return r;
}

TierSummary summary_from_json(const Json& j) {
  return {field<std::string>(j, "tier"), field<int>(j, "n"), field<double>(j, "sen_acc"), field<double>(j, "ned")};
}

BenchReport report_from_json(const Json& j) {
  BenchReport r;
  r.fingerprint = field<std::string>(j, "fingerprint");
  for (const auto& t : j.at("tiers")) r.tiers.push_back(summary_from_json(t));
  r.total = summary_from_json(j.at("total"));
  for (const auto& c : j.at("cases")) r.cases.push_back(record_from_json(c));
  return r;
}

CorpusManifest corpus_manifest_from_json(const Json& j) {
  CorpusManifest m = default_corpus_manifest();
  if (j.contains("seed")) m.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("image_height")) m.image_height = field<int>(j, "image_height");
  if (j.contains("image_width")) m.image_width = field<int>(j, "image_width");
  if (j.contains("factor")) m.factor = field<int>(j, "factor");
  if (j.contains("tau")) m.tau = field<double>(j, "tau");
  if (j.contains("scenes")) m.scenes = field<std::vector<std::string>>(j, "scenes");
  if (j.contains("texts")) m.texts = field<std::vector<std::string>>(j, "texts");
  if (j.contains("rows")) {
    m.rows.clear();
    for (const auto& r : j.at("rows")) {
      m.rows.push_back({field<int>(r, "y"), field<int>(r, "x"), field<int>(r, "height"), field<int>(r, "slots")});
    }
  }
  return m;
}

Json manifest_to_json(std::span<const BenchCase> cases) {
  Json a = Json::array();
  for (const auto& c : cases) a.push_back(to_json(c));
  return a;
}

std::vector<BenchCase> manifest_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("case manifest must be a JSON array");
  std::vector<BenchCase> cases;
  for (const auto& c : j) cases.push_back(case_from_json(c));
  return cases;
}

Json read_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace glyphguide
