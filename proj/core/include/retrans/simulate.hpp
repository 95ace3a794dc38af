#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "retrans/decode.hpp"
#include "retrans/model.hpp"
#include "retrans/ptl.hpp"

namespace retrans {

enum class Policy { kRetranslate, kStreamWaitK };

std::string_view to_string(Policy policy) noexcept;
/// Accepts "retranslate" and "stream". Throws ValidationError otherwise.
Policy parse_policy(std::string_view name);

struct PolicyRun {
  DecodeConfig config;
  Policy policy = Policy::kRetranslate;
  PrefixTranslationList ptl;
};

/// Re-translates every source prefix from scratch. Prefix i is decoded with
/// bias toward the previous *displayed* output and then truncated to
/// max(i - k, 0) tokens; the full-sentence translation is shown untruncated.
PrefixTranslationList retranslate_ptl(const ScoringModel& model, const TokenSeq& source,
                                      const DecodeConfig& config, std::string id = {});

/// Append-only wait-k agent: after reading i < I tokens it has written
/// max(i - k, 0) tokens (fewer if EOS was chosen); after the last read it
/// writes greedily until EOS or the length cap. Committed tokens never change.
PrefixTranslationList stream_waitk_ptl(const ScoringModel& model, const TokenSeq& source,
                                       std::size_t k, const DecodeConfig& config = {},
                                       std::string id = {});

PolicyRun run_policy(const ScoringModel& model, const TokenSeq& source, Policy policy,
                     const DecodeConfig& config, std::string id = {});

/// Runs `policy` over a corpus. Ids are "1", "2", ... in input order.
/// `threads` > 1 fans sentences out across workers; results keep input order.
std::vector<PrefixTranslationList> simulate_corpus(const ScoringModel& model,
                                                   const std::vector<TokenSeq>& sources,
                                                   Policy policy, const DecodeConfig& config,
                                                   std::size_t threads = 1);

}  // namespace retrans
