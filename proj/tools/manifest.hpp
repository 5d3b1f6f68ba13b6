#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "curvcap/plane/io.hpp"

namespace curvcap::cli {

// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string file_digest(const std::string& path);

struct FileDigest {
  std::string path;
  std::string digest;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // arguments after the program name
  Json config;
  std::uint64_t seed = 0;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  double wall_time = 0.0;  // seconds; the only field that varies between replays

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

}  // namespace curvcap::cli
