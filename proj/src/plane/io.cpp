#include "curvcap/plane/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curvcap {

namespace {

double number_field(const Json& obj, const char* key, bool required) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw std::invalid_argument(std::string("missing field '") + key + "'");
    return 0.0;
  }
  if (!it->is_number()) throw std::invalid_argument(std::string("field '") + key + "' is not a number");
  return it->get<double>();
}

struct RawAtoms {
  std::vector<Point> pos;
  std::vector<Complex> w;
  double resolution = 0.0;
};

RawAtoms parse_atoms(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("measure JSON must be an object");
  RawAtoms raw;
  raw.resolution = number_field(j, "resolution", true);
  auto it = j.find("atoms");
  if (it == j.end() || !it->is_array()) throw std::invalid_argument("measure JSON needs an 'atoms' array");
  for (const auto& a : *it) {
    if (!a.is_object()) throw std::invalid_argument("atom entry must be an object");
    raw.pos.emplace_back(number_field(a, "x", true), number_field(a, "y", true));
    raw.w.emplace_back(number_field(a, "re", true), number_field(a, "im", false));
  }
  return raw;
}

}  // namespace

Json to_json(const AtomicMeasure& m) {
  Json atoms = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    atoms.push_back({{"x", m.position(i).real()},
                     {"y", m.position(i).imag()},
                     {"re", m.weight(i)},
                     {"im", 0.0}});
  return {{"resolution", m.resolution()}, {"atoms", atoms}};
}

Json to_json(const ComplexAtomicMeasure& m) {
  Json atoms = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i)
    atoms.push_back({{"x", m.position(i).real()},
                     {"y", m.position(i).imag()},
                     {"re", m.weight(i).real()},
                     {"im", m.weight(i).imag()}});
  return {{"resolution", m.resolution()}, {"atoms", atoms}};
}

AtomicMeasure measure_from_json(const Json& j) {
  RawAtoms raw = parse_atoms(j);
  std::vector<double> w;
  for (const auto& c : raw.w) {
    if (c.imag() != 0.0) throw std::invalid_argument("positive measure has a complex weight");
    w.push_back(c.real());
  }
  return AtomicMeasure(std::move(raw.pos), std::move(w), raw.resolution);
}

ComplexAtomicMeasure complex_measure_from_json(const Json& j) {
  RawAtoms raw = parse_atoms(j);
  return ComplexAtomicMeasure(std::move(raw.pos), std::move(raw.w), raw.resolution);
}

Json to_json(const SegmentFamily& e) {
  Json segs = Json::array();
  for (const auto& s : e.segments)
    segs.push_back(Json::array({Json::array({s.a.real(), s.a.imag()}),
                                Json::array({s.b.real(), s.b.imag()})}));
  return {{"segments", segs}};
}

SegmentFamily segments_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array())
    throw std::invalid_argument("segment JSON needs a 'segments' array");
  SegmentFamily e;
  for (const auto& s : j["segments"]) {
    if (!s.is_array() || s.size() != 2) throw std::invalid_argument("segment must have two endpoints");
    Point ends[2];
    for (int k = 0; k < 2; ++k) {
      const auto& p = s[k];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw std::invalid_argument("segment endpoint must be [x, y]");
      ends[k] = Point(p[0].get<double>(), p[1].get<double>());
    }
    e.segments.push_back({ends[0], ends[1]});
  }
  e.validate();
  return e;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

Json read_json_file(const std::string& path) {
  std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace curvcap
