#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace retrans {

/// Sidecar metadata written next to every output artifact so a run can be
/// repeated exactly.
struct RunManifest {
  std::string command;
  /// Flat key/value settings, serialized in insertion order. Values are JSON
  /// literals (numbers, quoted strings, booleans).
  std::vector<std::pair<std::string, std::string>> settings;
  /// (path, fnv1a64 hex digest of the file contents)
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string version = RETRANS_VERSION;

  void set(std::string key, std::string json_literal);
  void set_string(std::string key, const std::string& value);
  void add_input(const std::filesystem::path& path);

  std::string to_json() const;
  /// Writes `<artifact>.manifest.json`.
  void write_beside(const std::filesystem::path& artifact) const;
};

/// 16 hex digits of fnv1a64 over the bytes.
std::string digest_hex(std::string_view bytes);

}  // namespace retrans
