#include "retrans/augment.hpp"

#include <algorithm>
#include <cmath>

#include "retrans/error.hpp"
#include "retrans/rng.hpp"

namespace retrans {

void AlignmentSet::check_bounds(std::size_t source_len, std::size_t target_len) const {
  for (const auto& [i, j] : links) {
    if (i >= source_len || j >= target_len) {
      throw ValidationError("alignment link " + std::to_string(i) + "-" + std::to_string(j) +
                            " outside a " + std::to_string(source_len) + "x" +
                            std::to_string(target_len) + " sentence pair");
    }
  }
}

void AugmentConfig::validate() const {
  if (!(truncate_prob >= 0.0 && truncate_prob <= 1.0)) {
    throw ValidationError("truncation probability must lie in [0, 1]");
  }
  if (forced_source_len && *forced_source_len == 0) {
    throw ValidationError("forced source prefix length must be at least 1");
  }
}

PrefixMode parse_prefix_mode(std::string_view name) {
  if (name == "proportional") return PrefixMode::kProportional;
  if (name == "aligned") return PrefixMode::kAligned;
  throw ValidationError("unknown prefix mode \"" + std::string(name) + "\"");
}

MixMode parse_mix_mode(std::string_view name) {
  if (name == "stochastic") return MixMode::kStochastic;
  if (name == "duplicate") return MixMode::kDuplicate;
  throw ValidationError("unknown mix mode \"" + std::string(name) + "\"");
}

std::size_t proportional_target_len(std::size_t source_len, std::size_t target_len,
                                     std::size_t source_prefix_len) {
  if (source_len == 0) throw ValidationError("empty source");
  // round-half-up(L_s * J / I) in exact integer arithmetic
  const std::size_t rounded = (2 * source_prefix_len * target_len + source_len) / (2 * source_len);
  return std::max<std::size_t>(1, rounded);
}

SentencePair proportional_prefix(const SentencePair& pair, std::size_t source_prefix_len) {
  const std::size_t source_len = pair.source.size();
  if (source_prefix_len < 1 || source_prefix_len > source_len) {
    throw ValidationError("source prefix length " + std::to_string(source_prefix_len) +
                          " outside 1.." + std::to_string(source_len));
  }
  const std::size_t target_prefix_len =
      proportional_target_len(source_len, pair.target.size(), source_prefix_len);
  return {pair.source.prefix(source_prefix_len), pair.target.prefix(target_prefix_len)};
}

std::optional<SentencePair> aligned_prefix(const SentencePair& pair, const AlignmentSet& alignments,
                                           std::size_t source_prefix_len) {
  const std::size_t source_len = pair.source.size();
  const std::size_t target_len = pair.target.size();
  if (source_prefix_len < 1 || source_prefix_len > source_len) {
    throw ValidationError("source prefix length " + std::to_string(source_prefix_len) +
                          " outside 1.." + std::to_string(source_len));
  }
  alignments.check_bounds(source_len, target_len);

  // Links from inside the source prefix push the lower bound up; links from
  // outside it cap the target prefix from above.
  std::size_t lower = 1;
  std::size_t upper = target_len;
  for (const auto& [i, j] : alignments.links) {
    if (i < source_prefix_len) {
      lower = std::max(lower, j + 1);
    } else {
      upper = std::min(upper, j);
    }
  }
  if (lower > upper) return std::nullopt;
  return SentencePair{pair.source.prefix(source_prefix_len), pair.target.prefix(lower)};
}

PrefixDraw draw_prefix(const AugmentConfig& config, std::size_t index, std::size_t source_len) {
  SplitMix64 rng(mix64(config.seed) ^ mix64(index + 0x5851f42d4c957f2dULL));
  PrefixDraw draw;
  draw.truncate = config.mix == MixMode::kDuplicate || rng.uniform() < config.truncate_prob;
  const std::size_t drawn = 1 + static_cast<std::size_t>(rng.below(source_len));
  draw.source_prefix_len =
      config.forced_source_len ? std::min(*config.forced_source_len, source_len) : drawn;
  return draw;
}

std::vector<SentencePair> augment_corpus(const std::vector<SentencePair>& corpus,
                                         const AugmentConfig& config,
                                         const std::vector<AlignmentSet>* alignments) {
  config.validate();
  if (config.mode == PrefixMode::kAligned &&
      (alignments == nullptr || alignments->size() != corpus.size())) {
    const std::size_t have = alignments ? alignments->size() : 0;
    throw ValidationError("aligned mode needs alignments for every pair; missing for sentence " +
                          std::to_string(have + 1));
  }

  std::vector<SentencePair> out;
  out.reserve(config.mix == MixMode::kDuplicate ? 2 * corpus.size() : corpus.size());
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    const SentencePair& pair = corpus[n];
    if (pair.source.empty() || pair.target.empty()) {
      throw ValidationError("sentence " + std::to_string(n + 1) + ": empty side");
    }
    const PrefixDraw draw = draw_prefix(config, n, pair.source.size());
    if (config.mix == MixMode::kDuplicate) out.push_back(pair);
    if (!draw.truncate) {
      out.push_back(pair);
      continue;
    }
    const std::size_t source_prefix_len = draw.source_prefix_len;
    if (config.mode == PrefixMode::kProportional) {
      out.push_back(proportional_prefix(pair, source_prefix_len));
      continue;
    }
    std::optional<SentencePair> prefix;
    try {
      prefix = aligned_prefix(pair, (*alignments)[n], source_prefix_len);
    } catch (const Error&) {
      rethrow_with_context("sentence " + std::to_string(n + 1));
    }
    if (prefix) {
      out.push_back(std::move(*prefix));
    } else if (config.mix == MixMode::kStochastic) {
      out.push_back(pair);
    }
  }
  return out;
}

}  // namespace retrans
