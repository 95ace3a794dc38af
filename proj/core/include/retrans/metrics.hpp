#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "retrans/ptl.hpp"
#include "retrans/tokens.hpp"

namespace retrans {

/// Content delay per final target position. g[j] holds the number of source
/// tokens read (1..I) before target prefix j + 1 reached its final value; the
/// vector is 0-indexed but its values are 1-based read counts.
struct DelayVector {
  std::vector<std::size_t> g;
  std::size_t source_len = 0;  // I
  std::size_t target_len = 0;  // J

  friend bool operator==(const DelayVector&, const DelayVector&) = default;
};

/// Throws ValidationError("no final content") when the final output is empty.
/// Tokens of intermediate outputs beyond the final length are ignored.
DelayVector content_delay(const PrefixTranslationList& ptl);

/// Differentiable average lagging over a delay vector.
double dal(const DelayVector& delays);

/// Erasure per step: erasures[0] is 0, erasures[i] = |o_{i-1}| - lcp(o_i, o_{i-1}).
std::vector<std::size_t> erasures(const PrefixTranslationList& ptl);
std::size_t total_erasure(const PrefixTranslationList& ptl);

/// Total erasure divided by the final output length. J = 0 is only accepted
/// when nothing was erased (the result is then 0).
double normalized_erasure(const PrefixTranslationList& ptl);

struct SentenceMetrics {
  std::string id;
  double dal = 0.0;
  double ne = 0.0;
  std::size_t erased = 0;
  std::size_t final_len = 0;
};

/// Corpus results. DAL is macro-averaged over sentences; NE is micro-averaged
/// (sum of erased tokens over sum of final lengths).
struct EvalReport {
  double bleu = 0.0;
  double dal = 0.0;
  double ne = 0.0;
  std::vector<SentenceMetrics> sentences;

  static constexpr const char* kDalAggregation = "macro";
  static constexpr const char* kNeAggregation = "micro";
};

/// Scores the final outputs with corpus BLEU and aggregates latency and
/// erasure. Per-sentence failures are rethrown with the sentence id attached.
EvalReport evaluate_corpus(const std::vector<PrefixTranslationList>& ptls,
                           const std::vector<TokenSeq>& references);

}  // namespace retrans
