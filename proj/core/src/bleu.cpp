#include "retrans/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <string>

#include "retrans/error.hpp"

namespace retrans {
namespace {

struct SpanLess {
  bool operator()(std::span<const std::string> a, std::span<const std::string> b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

using NgramCounts = std::map<std::span<const std::string>, std::size_t, SpanLess>;

NgramCounts count_ngrams(const TokenSeq& seq, std::size_t n) {
  NgramCounts counts;
  const auto tokens = seq.span();
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[tokens.subspan(i, n)];
  return counts;
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) noexcept {
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

double BleuStats::score() const {
  if (hyp_len == 0) return 0.0;
  double log_precision = 0.0;
  for (std::size_t n = 0; n < kBleuOrder; ++n) {
    // No smoothing: a zero (or undefined) precision zeroes the geometric mean.
    if (matches[n] == 0 || totals[n] == 0) return 0.0;
    log_precision += std::log(static_cast<double>(matches[n]) / static_cast<double>(totals[n]));
  }
  log_precision /= static_cast<double>(kBleuOrder);
  const double log_bp =
      hyp_len >= ref_len
          ? 0.0
          : 1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len);
  return 100.0 * std::exp(log_bp + log_precision);
}

BleuStats sentence_stats(const TokenSeq& hypothesis, const TokenSeq& reference) {
  BleuStats stats;
  stats.hyp_len = hypothesis.size();
  stats.ref_len = reference.size();
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    if (hypothesis.size() < n) break;
    stats.totals[n - 1] = hypothesis.size() - n + 1;
    const auto ref_counts = count_ngrams(reference, n);
    for (const auto& [gram, count] : count_ngrams(hypothesis, n)) {
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) stats.matches[n - 1] += std::min(count, it->second);
    }
  }
  return stats;
}

double corpus_bleu(const std::vector<TokenSeq>& hypotheses,
                   const std::vector<TokenSeq>& references) {
  if (hypotheses.size() != references.size()) {
    throw ValidationError("BLEU needs one reference per hypothesis (" +
                          std::to_string(hypotheses.size()) + " vs " +
                          std::to_string(references.size()) + ")");
  }
  if (hypotheses.empty()) throw ValidationError("BLEU of an empty corpus");
  BleuStats total;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    total += sentence_stats(hypotheses[i], references[i]);
  }
  return total.score();
}

}  // namespace retrans
