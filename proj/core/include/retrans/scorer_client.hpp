#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retrans/model.hpp"

namespace retrans {

// Line-delimited JSON over a child process's stdin/stdout.
//   request:  {"src": [tokens], "tgt": [tokens], "top": n}
//   response: {"items": [[token, logprob], ...], "eos": logprob}
// Items are sorted by descending logprob. "eos": null means EOS is
// impossible at this step.

struct ScorerRequest {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  std::size_t top = 0;  // 0 = no limit

  std::string to_json() const;
  static ScorerRequest parse(std::string_view line);
};

struct ScorerResponse {
  std::vector<std::pair<std::string, double>> items;
  std::optional<double> eos;

  std::string to_json() const;
  /// Throws ProtocolError (carrying the raw line) on malformed JSON,
  /// non-finite logprobs, unsorted or duplicate items.
  static ScorerResponse parse(std::string_view line);

  /// Renormalizes exp(logprob) over the items and EOS.
  Distribution to_distribution() const;
  /// Top `top` entries of a distribution as a response (zero-probability
  /// entries are omitted).
  static ScorerResponse from_distribution(const Distribution& dist, std::size_t top);
};

/// Answers requests from `in` with `model` until EOF. Used by `retrans serve`.
void serve_model(const ScoringModel& model, std::istream& in, std::ostream& out);

struct ScorerOptions {
  std::chrono::milliseconds timeout{30000};
  std::size_t top = 0;
};

/// ScoringModel backed by a child process started with `/bin/sh -c command`.
/// Requests are serialized with a mutex; use one instance per worker for
/// parallel decoding.
class ExternalScorerModel final : public ScoringModel {
 public:
  explicit ExternalScorerModel(std::string command, ScorerOptions options = {});
  ~ExternalScorerModel() override;

  ExternalScorerModel(const ExternalScorerModel&) = delete;
  ExternalScorerModel& operator=(const ExternalScorerModel&) = delete;

  Distribution next_distribution(std::span<const std::string> source_prefix,
                                 std::span<const std::string> target_prefix) const override;
  std::vector<std::string> vocabulary() const override { return {}; }
  std::string describe() const override;

  /// Raw exchange: sends one line, returns the reply line.
  std::string exchange(const std::string& request_line) const;

 private:
  struct Process;

  std::string command_;
  ScorerOptions options_;
  std::unique_ptr<Process> process_;
  mutable std::mutex mutex_;
};

}  // namespace retrans
