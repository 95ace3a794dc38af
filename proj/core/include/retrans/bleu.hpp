#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "retrans/tokens.hpp"

namespace retrans {

inline constexpr std::size_t kBleuOrder = 4;

/// Sufficient statistics for corpus BLEU; sentence stats add up.
struct BleuStats {
  std::array<std::size_t, kBleuOrder> matches{};
  std::array<std::size_t, kBleuOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& other) noexcept;
  /// BLEU-4 in percent. 0 when any pooled precision is 0 or undefined.
  double score() const;
};

BleuStats sentence_stats(const TokenSeq& hypothesis, const TokenSeq& reference);

/// Single-reference, cased, unsmoothed corpus BLEU-4 in [0, 100].
double corpus_bleu(const std::vector<TokenSeq>& hypotheses,
                   const std::vector<TokenSeq>& references);

}  // namespace retrans
