#include "retrans/tokens.hpp"

#include <algorithm>

#include "retrans/error.hpp"

namespace retrans {
namespace {

constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

bool is_valid_token(std::string_view token) noexcept {
  return !token.empty() && std::none_of(token.begin(), token.end(), is_space);
}

void check_token(std::string_view token) {
  if (token.empty()) throw ValidationError("empty token");
  if (!is_valid_token(token)) {
    throw ValidationError("token contains whitespace: \"" + std::string(token) + "\"");
  }
}

TokenSeq::TokenSeq(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (const auto& t : tokens_) check_token(t);
}

TokenSeq::TokenSeq(std::initializer_list<std::string> tokens) : tokens_(tokens) {
  for (const auto& t : tokens_) check_token(t);
}

TokenSeq TokenSeq::parse(std::string_view line) {
  TokenSeq seq;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) seq.tokens_.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return seq;
}

TokenSeq TokenSeq::prefix(std::size_t n) const {
  TokenSeq out;
  n = std::min(n, tokens_.size());
  out.tokens_.assign(tokens_.begin(), tokens_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

bool TokenSeq::starts_with(const TokenSeq& other) const noexcept {
  return other.size() <= size() && lcp_len(*this, other) == other.size();
}

void TokenSeq::push_back(std::string token) {
  check_token(token);
  tokens_.push_back(std::move(token));
}

std::string TokenSeq::str() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens_[i];
  }
  return out;
}

TokenSeq merge_subwords(const TokenSeq& seq, std::string_view marker, const WarningSink& warn) {
  if (marker.empty()) throw ValidationError("subword marker must be non-empty");
  const auto continues = [&](std::string_view t) {
    return t.size() >= marker.size() && t.substr(t.size() - marker.size()) == marker;
  };

  std::vector<std::string> merged;
  std::string pending;
  for (const auto& token : seq) {
    if (continues(token)) {
      pending.append(token, 0, token.size() - marker.size());
    } else {
      pending += token;
      merged.push_back(std::move(pending));
      pending.clear();
    }
  }
  // A dangling continuation: strip every trailing marker so the result is a
  // fixed point of the merge.
  if (!seq.empty() && continues(seq.back())) {
    while (continues(pending)) pending.resize(pending.size() - marker.size());
    if (warn) warn("trailing subword continuation \"" + seq.back() + "\" merged without successor");
    if (!pending.empty()) merged.push_back(std::move(pending));
  }
  return TokenSeq(std::move(merged));
}

std::size_t lcp_len(std::span<const std::string> a, std::span<const std::string> b) noexcept {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

}  // namespace retrans
