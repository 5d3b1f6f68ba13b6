#pragma once

#include <string>

#include <json.hpp>

#include "curvcap/plane/generators.hpp"
#include "curvcap/plane/measure.hpp"

namespace curvcap {

using Json = nlohmann::json;

// {"resolution": h, "atoms": [{"x","y","re","im"}]}
Json to_json(const AtomicMeasure& m);
Json to_json(const ComplexAtomicMeasure& m);
AtomicMeasure measure_from_json(const Json& j);
ComplexAtomicMeasure complex_measure_from_json(const Json& j);

// {"segments": [[[x1,y1],[x2,y2]], ...]}
Json to_json(const SegmentFamily& e);
SegmentFamily segments_from_json(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);
std::string dump_json(const Json& j);

}  // namespace curvcap
