#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace orey::cli {

std::string sha256_file(const std::filesystem::path& file);

struct OutputRecord {
  std::string flag;  // e.g. "--out"
  std::string path;
  std::string sha256;
};

// Reproducibility record written next to each output file as <file>.manifest.json.
struct RunManifest {
  std::string tool = "orey_cli";
  std::string version;
  std::string subcommand;
  std::vector<std::string> args;  // argv after the program name
  nlohmann::json flags = nlohmann::json::object();
  std::string model;
  std::optional<std::uint64_t> seed;
  std::string timestamp;
  std::vector<OutputRecord> outputs;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string utc_timestamp();
std::filesystem::path manifest_path(const std::filesystem::path& output);

}  // namespace orey::cli
