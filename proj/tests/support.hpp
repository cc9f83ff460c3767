#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace testsupport {

inline std::filesystem::path fixture_dir() {
  return std::filesystem::path(FASEMCOM_FIXTURE_DIR);
}

inline nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("missing fixture: " + path.string());
  return nlohmann::json::parse(f);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("missing file: " + path.string());
  std::ostringstream out;
  out << f.rdbuf();
  return out.str();
}

}  // namespace testsupport
