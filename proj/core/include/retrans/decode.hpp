#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "retrans/model.hpp"
#include "retrans/tokens.hpp"

namespace retrans {

struct DecodeConfig {
  double beta = 0.0;          // bias weight in [0, 1]
  std::size_t k = 0;          // wait-k truncation
  std::size_t beam = 1;       // beam width, >= 1
  double max_len_factor = 2.0;
  std::size_t max_len_slack = 5;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
  /// ceil(max_len_factor * source_len) + max_len_slack
  std::size_t max_length(std::size_t source_len) const;
};

struct Hypothesis {
  TokenSeq tokens;
  double score = 0.0;      // sum of log-probabilities
  bool following = true;   // still matching the bias target exactly
};

/// Argmax decoding. Ties go to EOS first, then the lexicographically smaller
/// token.
TokenSeq greedy_decode(const ScoringModel& model, const TokenSeq& source,
                       const DecodeConfig& config = {});

/// Beam search over summed log-probabilities without length normalization.
/// Finished hypotheses compete on raw score; ties prefer the
/// lexicographically smaller (then shorter) token sequence.
TokenSeq beam_decode(const ScoringModel& model, const TokenSeq& source, std::size_t beam,
                     const DecodeConfig& config = {});

/// (1 - beta) * p + beta * onehot(forced), in probability space. Returns the
/// input unchanged when nothing is forced.
Distribution bias_distribution(const Distribution& model_dist,
                               const std::optional<std::string>& forced_token, double beta);

/// Beam search where a hypothesis is pulled toward `previous_output` for as
/// long as it reproduces it token for token. Bias stops at the first
/// divergence or once the previous output is exhausted.
TokenSeq biased_beam_decode(const ScoringModel& model, const TokenSeq& source,
                            const TokenSeq& previous_output, const DecodeConfig& config);

/// First min(|output|, max(source_prefix_len - k, 0)) tokens.
TokenSeq waitk_truncate(const TokenSeq& output, std::size_t source_prefix_len, std::size_t k);

}  // namespace retrans
