#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace retrans {

/// An ordered list of tokens. Every token is non-empty and free of whitespace;
/// the constructors and push_back enforce this and throw ValidationError.
class TokenSeq {
 public:
  using value_type = std::string;
  using const_iterator = std::vector<std::string>::const_iterator;

  TokenSeq() = default;
  explicit TokenSeq(std::vector<std::string> tokens);
  TokenSeq(std::initializer_list<std::string> tokens);

  /// Splits on ASCII whitespace.
  static TokenSeq parse(std::string_view line);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }
  const std::string& back() const { return tokens_.back(); }
  const_iterator begin() const noexcept { return tokens_.begin(); }
  const_iterator end() const noexcept { return tokens_.end(); }

  std::span<const std::string> span() const noexcept { return tokens_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// First min(n, size()) tokens.
  TokenSeq prefix(std::size_t n) const;
  bool starts_with(const TokenSeq& other) const noexcept;

  void push_back(std::string token);
  void pop_back() { tokens_.pop_back(); }

  /// Space-joined.
  std::string str() const;

  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
  friend auto operator<=>(const TokenSeq& a, const TokenSeq& b) {
    return a.tokens_ <=> b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
};

/// Throws ValidationError unless `token` is a legal token.
void check_token(std::string_view token);
bool is_valid_token(std::string_view token) noexcept;

struct SentencePair {
  TokenSeq source;
  TokenSeq target;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

/// Receives non-fatal diagnostics.
using WarningSink = std::function<void(const std::string&)>;

inline constexpr std::string_view kDefaultSubwordMarker = "@@";

/// Joins suffix-marked subword units: a token ending in `marker` is glued,
/// marker stripped, to the token that follows it. A trailing continuation
/// is kept with its markers stripped and reported through `warn`.
TokenSeq merge_subwords(const TokenSeq& seq, std::string_view marker = kDefaultSubwordMarker,
                        const WarningSink& warn = {});

/// Length of the longest common prefix.
std::size_t lcp_len(std::span<const std::string> a, std::span<const std::string> b) noexcept;
inline std::size_t lcp_len(const TokenSeq& a, const TokenSeq& b) noexcept {
  return lcp_len(a.span(), b.span());
}

}  // namespace retrans
