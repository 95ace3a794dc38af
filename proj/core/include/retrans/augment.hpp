#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "retrans/tokens.hpp"

namespace retrans {

/// Word alignment links (source index, target index), 0-based.
struct AlignmentSet {
  std::vector<std::pair<std::size_t, std::size_t>> links;

  /// Throws ValidationError if a link falls outside the sentence.
  void check_bounds(std::size_t source_len, std::size_t target_len) const;
};

enum class PrefixMode { kProportional, kAligned };
enum class MixMode { kStochastic, kDuplicate };

struct AugmentConfig {
  PrefixMode mode = PrefixMode::kProportional;
  MixMode mix = MixMode::kStochastic;
  double truncate_prob = 0.5;  // stochastic mix only
  std::uint64_t seed = 0;
  /// Test hook: use this source prefix length (clamped to I) instead of a draw.
  std::optional<std::size_t> forced_source_len;

  void validate() const;
};

PrefixMode parse_prefix_mode(std::string_view name);
MixMode parse_mix_mode(std::string_view name);

/// Target length round-half-up(L_s / I * J), at least 1.
std::size_t proportional_target_len(std::size_t source_len, std::size_t target_len,
                                     std::size_t source_prefix_len);

SentencePair proportional_prefix(const SentencePair& pair, std::size_t source_prefix_len);

/// Smallest target prefix length L_t >= 1 such that every link (i, j)
/// satisfies i < L_s <=> j < L_t. std::nullopt when no L_t in 1..J works.
std::optional<SentencePair> aligned_prefix(const SentencePair& pair,
                                           const AlignmentSet& alignments,
                                           std::size_t source_prefix_len);

struct PrefixDraw {
  bool truncate = false;
  std::size_t source_prefix_len = 0;
};

/// The random decisions augment_corpus makes for pair `index`: whether to
/// truncate, and L_s ~ Uniform{1..source_len}.
PrefixDraw draw_prefix(const AugmentConfig& config, std::size_t index, std::size_t source_len);

/// Mixes prefix pairs into a corpus. Each pair draws from its own stream
/// seeded by (seed, index), so the output is a pure function of the inputs.
/// Aligned mode requires one alignment set per pair.
std::vector<SentencePair> augment_corpus(const std::vector<SentencePair>& corpus,
                                         const AugmentConfig& config,
                                         const std::vector<AlignmentSet>* alignments = nullptr);

}  // namespace retrans
