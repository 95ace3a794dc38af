#include "retrans/metrics.hpp"

#include <algorithm>

#include "retrans/bleu.hpp"
#include "retrans/error.hpp"

namespace retrans {

DelayVector content_delay(const PrefixTranslationList& ptl) {
  require_valid(ptl);
  const std::size_t source_len = ptl.source_len();
  const TokenSeq& final_out = ptl.final_output();
  const std::size_t target_len = final_out.size();
  if (target_len == 0) throw ValidationError("no final content in PTL \"" + ptl.id + "\"");

  // stable[i]: how many leading final tokens every output from step i onward
  // agrees on. The prefix ending at j is final from the first step whose
  // suffix minimum reaches j. lcp against the final output is capped at J, so
  // overlong intermediate outputs contribute nothing extra.
  std::vector<std::size_t> stable(source_len);
  std::size_t running = target_len;
  for (std::size_t i = source_len; i-- > 0;) {
    running = std::min(running, lcp_len(ptl.outputs[i], final_out));
    stable[i] = running;
  }

  DelayVector delays;
  delays.source_len = source_len;
  delays.target_len = target_len;
  delays.g.reserve(target_len);
  std::size_t step = 0;
  for (std::size_t j = 1; j <= target_len; ++j) {
    while (stable[step] < j) ++step;  // stable is non-decreasing, ends at J
    delays.g.push_back(step + 1);
  }
  return delays;
}

double dal(const DelayVector& delays) {
  const std::size_t source_len = delays.source_len;
  const std::size_t target_len = delays.g.size();
  if (target_len == 0) throw ValidationError("DAL undefined for an empty target");
  if (source_len == 0) throw ValidationError("DAL undefined for an empty source");

  // 1/gamma = I/J: the minimal per-token cost.
  const double step_cost = static_cast<double>(source_len) / static_cast<double>(target_len);
  double adjusted = static_cast<double>(delays.g[0]);
  double sum = adjusted;
  for (std::size_t j = 1; j < target_len; ++j) {
    adjusted = std::max(static_cast<double>(delays.g[j]), adjusted + step_cost);
    sum += adjusted - static_cast<double>(j) * step_cost;
  }
  return sum / static_cast<double>(target_len);
}

std::vector<std::size_t> erasures(const PrefixTranslationList& ptl) {
  std::vector<std::size_t> out(ptl.outputs.size(), 0);
  for (std::size_t i = 1; i < ptl.outputs.size(); ++i) {
    out[i] = ptl.outputs[i - 1].size() - lcp_len(ptl.outputs[i], ptl.outputs[i - 1]);
  }
  return out;
}

std::size_t total_erasure(const PrefixTranslationList& ptl) {
  std::size_t sum = 0;
  for (std::size_t e : erasures(ptl)) sum += e;
  return sum;
}

double normalized_erasure(const PrefixTranslationList& ptl) {
  const std::size_t erased = total_erasure(ptl);
  const std::size_t target_len = ptl.final_len();
  if (target_len == 0) {
    if (erased == 0) return 0.0;
    throw ValidationError("normalized erasure undefined: PTL \"" + ptl.id +
                          "\" erases tokens but ends empty");
  }
  return static_cast<double>(erased) / static_cast<double>(target_len);
}

EvalReport evaluate_corpus(const std::vector<PrefixTranslationList>& ptls,
                           const std::vector<TokenSeq>& references) {
  if (ptls.size() != references.size()) {
    throw ValidationError("corpus has " + std::to_string(ptls.size()) + " PTLs but " +
                          std::to_string(references.size()) + " references");
  }
  if (ptls.empty()) throw ValidationError("empty corpus");

  EvalReport report;
  std::vector<TokenSeq> finals;
  finals.reserve(ptls.size());
  std::size_t erased_sum = 0;
  std::size_t final_sum = 0;
  double dal_sum = 0.0;
  for (const auto& ptl : ptls) {
    SentenceMetrics m;
    m.id = ptl.id;
    try {
      require_valid(ptl);
      m.final_len = ptl.final_len();
      m.erased = total_erasure(ptl);
      m.ne = normalized_erasure(ptl);
      m.dal = dal(content_delay(ptl));
    } catch (const Error&) {
      rethrow_with_context("sentence \"" + ptl.id + "\"");
    }
    erased_sum += m.erased;
    final_sum += m.final_len;
    dal_sum += m.dal;
    finals.push_back(ptl.final_output());
    report.sentences.push_back(std::move(m));
  }
  report.bleu = corpus_bleu(finals, references);
  report.dal = dal_sum / static_cast<double>(ptls.size());
  report.ne = static_cast<double>(erased_sum) / static_cast<double>(final_sum);
  return report;
}

}  // namespace retrans
