#include "manifest.hpp"

#include <cstdio>

namespace curvcap::cli {

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::string& path) { return fnv1a_hex(read_text_file(path)); }

namespace {

Json digests_json(const std::vector<FileDigest>& v) {
  Json a = Json::array();
  for (const auto& d : v) a.push_back({{"path", d.path}, {"fnv1a", d.digest}});
  return a;
}

std::vector<FileDigest> digests_from(const Json& a) {
  std::vector<FileDigest> v;
  for (const auto& d : a) v.push_back({d.at("path").get<std::string>(), d.at("fnv1a").get<std::string>()});
  return v;
}

}  // namespace

Json RunManifest::to_json() const {
  return {{"command", command}, {"argv", argv},          {"config", config},    {"seed", seed},
          {"inputs", digests_json(inputs)}, {"outputs", digests_json(outputs)}, {"wall_time", wall_time}};
}

RunManifest RunManifest::from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.config = j.value("config", Json::object());
  m.seed = j.value("seed", std::uint64_t{0});
  m.inputs = digests_from(j.at("inputs"));
  m.outputs = digests_from(j.at("outputs"));
  m.wall_time = j.value("wall_time", 0.0);
  return m;
}

}  // namespace curvcap::cli
