#include "retrans/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "retrans/error.hpp"
#include "retrans/rng.hpp"
#include "retrans/tokens.hpp"

namespace retrans {

double Distribution::prob(const std::string& token) const {
  const auto it = std::lower_bound(tokens.begin(), tokens.end(), token,
                                   [](const TokenProb& e, const std::string& t) { return e.token < t; });
  return it != tokens.end() && it->token == token ? it->prob : 0.0;
}

double Distribution::total() const {
  double sum = eos;
  for (const auto& e : tokens) sum += e.prob;
  return sum;
}

Distribution Distribution::from_weights(std::vector<TokenProb> weights, double eos_weight) {
  std::sort(weights.begin(), weights.end(),
            [](const TokenProb& a, const TokenProb& b) { return a.token < b.token; });
  Distribution dist;
  for (auto& w : weights) {
    if (!std::isfinite(w.prob) || w.prob < 0.0) {
      throw ValidationError("invalid weight for token \"" + w.token + "\"");
    }
    if (!dist.tokens.empty() && dist.tokens.back().token == w.token) {
      dist.tokens.back().prob += w.prob;
    } else {
      dist.tokens.push_back(std::move(w));
    }
  }
  if (!std::isfinite(eos_weight) || eos_weight < 0.0) throw ValidationError("invalid EOS weight");
  const double sum = dist.total() + eos_weight;
  if (!(sum > 0.0)) throw ValidationError("distribution has no mass");
  for (auto& e : dist.tokens) e.prob /= sum;
  dist.eos = eos_weight / sum;
  return dist;
}

void check_distribution(const Distribution& dist, double tolerance) {
  if (!(dist.eos >= 0.0) || !std::isfinite(dist.eos)) throw ValidationError("invalid EOS probability");
  for (std::size_t i = 0; i < dist.tokens.size(); ++i) {
    const auto& e = dist.tokens[i];
    if (!(e.prob >= 0.0) || !std::isfinite(e.prob)) {
      throw ValidationError("invalid probability for \"" + e.token + "\"");
    }
    if (i > 0 && !(dist.tokens[i - 1].token < e.token)) {
      throw ValidationError("distribution entries not strictly sorted at \"" + e.token + "\"");
    }
  }
  const double sum = dist.total();
  if (std::abs(sum - 1.0) > tolerance) {
    throw ValidationError("distribution sums to " + std::to_string(sum));
  }
}

// --- SeededRandomModel ------------------------------------------------------

SeededRandomModel::SeededRandomModel(std::uint64_t seed, std::vector<std::string> vocab)
    : seed_(seed), vocab_(std::move(vocab)) {
  if (vocab_.empty()) throw ValidationError("seeded model needs a non-empty vocabulary");
  for (const auto& t : vocab_) check_token(t);
  std::sort(vocab_.begin(), vocab_.end());
  vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
}

Distribution SeededRandomModel::next_distribution(std::span<const std::string> source_prefix,
                                                  std::span<const std::string> target_prefix) const {
  std::uint64_t h = mix64(seed_);
  for (const auto& t : source_prefix) h = fnv1a64("\x1f", fnv1a64(t, h));
  h = fnv1a64("\x1e", h);
  for (const auto& t : target_prefix) h = fnv1a64("\x1f", fnv1a64(t, h));
  SplitMix64 rng(h ^ seed_);

  std::vector<TokenProb> weights;
  weights.reserve(vocab_.size());
  for (const auto& t : vocab_) weights.push_back({t, 0.05 + 0.95 * rng.uniform()});
  const double eos_draw = rng.uniform();
  const double eos = target_prefix.size() < source_prefix.size() ? 0.0 : 2.0 * eos_draw;
  return Distribution::from_weights(std::move(weights), eos);
}

std::string SeededRandomModel::describe() const {
  return "seeded-random(seed=" + std::to_string(seed_) + ",vocab=" + std::to_string(vocab_.size()) +
         ")";
}

// --- LexicalTableModel ------------------------------------------------------

LexicalTableModel::LexicalTableModel(Table tables, bool eos_when_covered)
    : tables_(std::move(tables)), eos_when_covered_(eos_when_covered) {
  for (const auto& [src, row] : tables_) {
    check_token(src);
    double sum = 0.0;
    for (const auto& [tgt, p] : row) {
      if (tgt != kEosKey) check_token(tgt);
      if (!std::isfinite(p) || p < 0.0) {
        throw ValidationError("table \"" + src + "\": invalid probability for \"" + tgt + "\"");
      }
      sum += p;
    }
    if (!(sum > 0.0)) throw ValidationError("table \"" + src + "\" has no mass");
  }
}

Distribution LexicalTableModel::next_distribution(std::span<const std::string> source_prefix,
                                                  std::span<const std::string> target_prefix) const {
  const std::size_t pos = target_prefix.size();
  if (source_prefix.empty() || (eos_when_covered_ && pos >= source_prefix.size())) {
    return Distribution{{}, 1.0};
  }
  const std::string& src = source_prefix[std::min(pos, source_prefix.size() - 1)];
  const auto it = tables_.find(src);
  if (it == tables_.end()) return Distribution{{{src, 1.0}}, 0.0};

  std::vector<TokenProb> weights;
  double eos = 0.0;
  for (const auto& [tgt, p] : it->second) {
    if (tgt == kEosKey) {
      eos += p;
    } else {
      weights.push_back({tgt, p});
    }
  }
  return Distribution::from_weights(std::move(weights), eos);
}

std::vector<std::string> LexicalTableModel::vocabulary() const {
  std::set<std::string> vocab;
  for (const auto& [src, row] : tables_) {
    for (const auto& [tgt, p] : row) {
      if (tgt != kEosKey) vocab.insert(tgt);
    }
  }
  return {vocab.begin(), vocab.end()};
}

std::string LexicalTableModel::describe() const {
  return "lexical-table(sources=" + std::to_string(tables_.size()) +
         ",eos_when_covered=" + (eos_when_covered_ ? "true" : "false") + ")";
}

}  // namespace retrans
