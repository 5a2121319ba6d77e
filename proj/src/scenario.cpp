#include <json.hpp>

#include "alphaeff/dataio.hpp"
#include "alphaeff/errors.hpp"

namespace alphaeff {

namespace {

using json = nlohmann::ordered_json;

// Fork-join with equal chunks and free control: S=1.5, 3 x P=2.5, S=1.
constexpr std::string_view kClassic = R"({
  "segments": [
    {"kind": "S", "duration": 1.5},
    {"kind": "P", "duration": 2.5},
    {"kind": "P", "duration": 2.5},
    {"kind": "P", "duration": 2.5},
    {"kind": "S", "duration": 1}
  ]
}
)";

// Unequal chunks plus two control segments around the parallel phase.
constexpr std::string_view kRealistic = R"({
  "segments": [
    {"kind": "S", "duration": 1.5},
    {"kind": "C", "duration": 0.5},
    {"kind": "P", "duration": 2.5},
    {"kind": "P", "duration": 2.0},
    {"kind": "P", "duration": 3.0},
    {"kind": "C", "duration": 1.0},
    {"kind": "S", "duration": 1}
  ]
}
)";

SegmentKind parse_segment_kind(const std::string &s, std::size_t index) {
  if (s == "S")
    return SegmentKind::Sequential;
  if (s == "P")
    return SegmentKind::ParallelChunk;
  if (s == "C")
    return SegmentKind::Control;
  throw ParseError("segments[" + std::to_string(index) + "]: unknown kind '" +
                   s + "' (expected S, P or C)");
}

std::string_view segment_code(SegmentKind kind) {
  switch (kind) {
  case SegmentKind::Sequential:
    return "S";
  case SegmentKind::ParallelChunk:
    return "P";
  case SegmentKind::Control:
    return "C";
  }
  return "?";
}

} // namespace

Timeline parse_timeline_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid scenario JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("segments") ||
      !doc["segments"].is_array())
    throw ParseError("scenario must be an object with a 'segments' array");

  std::vector<Segment> segments;
  std::size_t i = 0;
  for (const auto &s : doc["segments"]) {
    if (!s.is_object() || !s.contains("kind") || !s["kind"].is_string() ||
        !s.contains("duration") || !s["duration"].is_number())
      throw ParseError("segments[" + std::to_string(i) +
                       "]: needs string 'kind' and numeric 'duration'");
    segments.push_back({parse_segment_kind(s["kind"].get<std::string>(), i),
                        s["duration"].get<double>()});
    ++i;
  }
  try {
    return Timeline(std::move(segments));
  } catch (const DomainError &e) {
    throw ParseError(e.what());
  }
}

std::string timeline_to_json(const Timeline &timeline) {
  json doc;
  doc["segments"] = json::array();
  for (const auto &s : timeline.segments())
    doc["segments"].push_back(
        {{"kind", segment_code(s.kind)}, {"duration", s.duration}});
  return doc.dump(2) + "\n";
}

std::vector<std::string> scenario_ids() { return {"classic", "realistic"}; }

std::string_view scenario_json(std::string_view id) {
  if (id == "classic")
    return kClassic;
  if (id == "realistic")
    return kRealistic;
  throw ParseError("unknown scenario '" + std::string(id) + "'");
}

} // namespace alphaeff
