#include "retrans/manifest.hpp"

#include <cstdio>

#include <json.hpp>

#include "retrans/io.hpp"
#include "retrans/rng.hpp"

namespace retrans {

std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void RunManifest::set(std::string key, std::string json_literal) {
  settings.emplace_back(std::move(key), std::move(json_literal));
}

void RunManifest::set_string(std::string key, const std::string& value) {
  set(std::move(key), nlohmann::json(value).dump());
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs.emplace_back(path.string(), digest_hex(io::read_file(path)));
}

std::string RunManifest::to_json() const {
  const auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
  std::string out = "{\n  \"command\": " + quote(command) + ",\n";
  for (const auto& [key, value] : settings) out += "  " + quote(key) + ": " + value + ",\n";
  out += "  \"inputs\": [";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += "    {\"path\": " + quote(inputs[i].first) + ", \"fnv1a64\": " + quote(inputs[i].second) + "}";
  }
  out += inputs.empty() ? "],\n" : "\n  ],\n";
  out += "  \"version\": " + quote(version) + "\n}\n";
  return out;
}

void RunManifest::write_beside(const std::filesystem::path& artifact) const {
  io::write_file(artifact.string() + ".manifest.json", to_json());
}

}  // namespace retrans
