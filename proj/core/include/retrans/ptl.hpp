#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "retrans/tokens.hpp"

namespace retrans {

/// One displayed output per source prefix: outputs[i] is what was shown after
/// reading i + 1 source tokens. Invalid shapes are representable on purpose so
/// that validate_ptl can report them; metric functions assume a valid list.
struct PrefixTranslationList {
  std::string id;
  TokenSeq source;
  std::vector<TokenSeq> outputs;

  std::size_t source_len() const noexcept { return source.size(); }
  /// Length of the final output (J). Zero for an empty list.
  std::size_t final_len() const noexcept { return outputs.empty() ? 0 : outputs.back().size(); }
  const TokenSeq& final_output() const { return outputs.back(); }

  friend bool operator==(const PrefixTranslationList&, const PrefixTranslationList&) = default;
};

struct ValidationReport {
  bool valid = true;
  bool append_only = false;
  std::vector<std::string> violations;
};

ValidationReport validate_ptl(const PrefixTranslationList& ptl);

/// Throws ValidationError carrying the first violation.
void require_valid(const PrefixTranslationList& ptl);

/// Every output extends the one before it.
bool is_append_only(const PrefixTranslationList& ptl) noexcept;

/// Applies merge_subwords to the source and to each output independently.
PrefixTranslationList merge_ptl(const PrefixTranslationList& ptl, std::string_view marker,
                                const WarningSink& warn = {});

}  // namespace retrans
