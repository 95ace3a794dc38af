#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace retrans {

struct TokenProb {
  std::string token;
  double prob = 0.0;

  friend bool operator==(const TokenProb&, const TokenProb&) = default;
};

/// Next-token distribution. `tokens` is sorted by token and holds no
/// duplicates; any token not listed has probability 0.
struct Distribution {
  std::vector<TokenProb> tokens;
  double eos = 0.0;

  double prob(const std::string& token) const;
  double total() const;

  /// Builds a normalized distribution from non-negative weights.
  static Distribution from_weights(std::vector<TokenProb> weights, double eos_weight);

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

/// Checks the probability contract: entries >= 0, sorted, unique, and a
/// total within `tolerance` of 1. Throws ValidationError.
void check_distribution(const Distribution& dist, double tolerance = 1e-6);

/// Next-token scorer. Implementations are deterministic and safe to call
/// concurrently from several threads.
class ScoringModel {
 public:
  virtual ~ScoringModel() = default;

  virtual Distribution next_distribution(std::span<const std::string> source_prefix,
                                         std::span<const std::string> target_prefix) const = 0;

  /// Known output vocabulary, sorted; empty when the model cannot enumerate it.
  virtual std::vector<std::string> vocabulary() const = 0;

  /// Short label recorded in run manifests.
  virtual std::string describe() const = 0;
};

/// Deterministic pseudo-random scorer. The distribution is a pure function of
/// (seed, source prefix, target prefix). Every vocabulary token gets weight in
/// [0.05, 1); EOS has weight 0 until the target is at least as long as the
/// source prefix and a weight in [0, 2) afterwards.
class SeededRandomModel final : public ScoringModel {
 public:
  SeededRandomModel(std::uint64_t seed, std::vector<std::string> vocab);

  Distribution next_distribution(std::span<const std::string> source_prefix,
                                 std::span<const std::string> target_prefix) const override;
  std::vector<std::string> vocabulary() const override { return vocab_; }
  std::string describe() const override;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::vector<std::string> vocab_;
};

/// Word-by-word translation table. Target position t is translated from
/// source token min(t, |source| - 1) using that token's table (weights are
/// normalized); tokens without a table are copied through. The reserved
/// target "</s>" puts mass on EOS. With eos_when_covered, the distribution
/// is one-hot EOS once |target| >= |source|.
class LexicalTableModel final : public ScoringModel {
 public:
  using Table = std::map<std::string, std::map<std::string, double>>;

  static constexpr const char* kEosKey = "</s>";

  explicit LexicalTableModel(Table tables, bool eos_when_covered = true);

  /// A model that copies the source and then stops.
  static LexicalTableModel identity() { return LexicalTableModel({}, true); }

  Distribution next_distribution(std::span<const std::string> source_prefix,
                                 std::span<const std::string> target_prefix) const override;
  std::vector<std::string> vocabulary() const override;
  std::string describe() const override;

  const Table& tables() const noexcept { return tables_; }
  bool eos_when_covered() const noexcept { return eos_when_covered_; }

 private:
  Table tables_;
  bool eos_when_covered_;
};

}  // namespace retrans
