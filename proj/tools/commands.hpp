#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "curvcap/plane/io.hpp"

namespace curvcap::cli {

// What a command read and wrote, for the run manifest.
struct CommandRecord {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct TbOptions {
  std::string measure;
  std::optional<std::string> nu;
  std::optional<std::string> out;
  int trials = 1000;
  int m = 2;
  double M = 8.0;
  double c_d = 4.0;
  double c0 = 100.0;
  std::uint64_t seed = 0;
};

int cmd_tb(const TbOptions& opt, CommandRecord& rec, std::ostream& out, std::ostream& err);

// Writes text and records the path as an output.
void emit(CommandRecord& rec, const std::string& path, const std::string& text);

}  // namespace curvcap::cli
