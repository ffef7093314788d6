#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "glyphguide/bench.hpp"
#include "glyphguide/corpus.hpp"
#include "glyphguide/geometry.hpp"
#include "glyphguide/guidance.hpp"

namespace glyphguide {

using Json = nlohmann::json;

Json to_json(Vec2 p);
Json to_json(const Quad& q);
Json to_json(const PolygonMask& poly);  // [[x, y], ...]
Json to_json(const BezierCurve& c);
Json to_json(const OrientedRect& r);
Json to_json(const QuadSegment& s);
Json to_json(const FlatLayout& layout);
Json to_json(const Decomposition& d);
Json to_json(const BenchCase& c);
Json to_json(const BaseSpec& b);
Json to_json(const CaseRecord& r);
Json to_json(const TierSummary& s);
Json to_json(const BenchReport& r);
Json to_json(const GuidanceConfig& g);
Json to_json(const VtgmParams& p);
Json to_json(const CorpusManifest& m);
Json to_json(const GuidanceTraceEntry& e);

Vec2 vec2_from_json(const Json& j);
// Accepts either a bare vertex array or an object with a "mask" array.
PolygonMask polygon_from_json(const Json& j);
QuadSegment segment_from_json(const Json& j);
BenchCase case_from_json(const Json& j);
BaseSpec base_spec_from_json(const Json& j);
CaseRecord record_from_json(const Json& j);
TierSummary summary_from_json(const Json& j);
BenchReport report_from_json(const Json& j);
CorpusManifest corpus_manifest_from_json(const Json& j);

Json manifest_to_json(std::span<const BenchCase> cases);
std::vector<BenchCase> manifest_from_json(const Json& j);

Json read_json_file(const std::string& path);
// Pretty-printed with a trailing newline; key order is sorted so output is stable.
std::string dump_json(const Json& j);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace glyphguide
