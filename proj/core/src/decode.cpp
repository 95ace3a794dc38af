#include "retrans/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "retrans/error.hpp"

namespace retrans {

void DecodeConfig::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in [0, 1]");
  if (beam < 1) throw ValidationError("beam must be at least 1");
  if (!std::isfinite(max_len_factor) || max_len_factor < 0.0) {
    throw ValidationError("max_len_factor must be finite and non-negative");
  }
}

std::size_t DecodeConfig::max_length(std::size_t source_len) const {
  return static_cast<std::size_t>(std::ceil(max_len_factor * static_cast<double>(source_len))) +
         max_len_slack;
}

TokenSeq greedy_decode(const ScoringModel& model, const TokenSeq& source, const DecodeConfig& config) {
  const std::size_t cap = config.max_length(source.size());
  TokenSeq out;
  while (out.size() < cap) {
    const Distribution dist = model.next_distribution(source.span(), out.span());
    // EOS wins ties; tokens are visited in lexicographic order and only a
    // strictly larger probability replaces the incumbent.
    const std::string* best = nullptr;
    double best_p = dist.eos;
    for (const auto& e : dist.tokens) {
      if (e.prob > best_p) {
        best = &e.token;
        best_p = e.prob;
      }
    }
    if (best == nullptr || !(best_p > 0.0)) break;
    out.push_back(*best);
  }
  return out;
}

Distribution bias_distribution(const Distribution& model_dist,
                               const std::optional<std::string>& forced_token, double beta) {
  if (!forced_token) return model_dist;
  Distribution out = model_dist;
  if (beta > 0.0) {
    const auto it = std::lower_bound(
        out.tokens.begin(), out.tokens.end(), *forced_token,
        [](const TokenProb& e, const std::string& t) { return e.token < t; });
    if (it == out.tokens.end() || it->token != *forced_token) {
      out.tokens.insert(it, TokenProb{*forced_token, 0.0});
    }
  }
  const double keep = 1.0 - beta;
  for (auto& e : out.tokens) {
    e.prob = keep * e.prob + (e.token == *forced_token ? beta : 0.0);
  }
  out.eos = keep * out.eos;
  return out;
}

namespace {

struct Live {
  TokenSeq tokens;
  double score = 0.0;
  bool following = false;
};

// An expansion of live[parent] by `token` (nullptr = EOS).
struct Candidate {
  std::size_t parent = 0;
  const std::string* token = nullptr;
  double score = 0.0;
  bool following = false;
};

// Lexicographic order of parent.tokens (+ token); a proper prefix sorts first.
bool seq_less(const TokenSeq& a, const std::string* a_tail, const TokenSeq& b,
              const std::string* b_tail) {
  const std::size_t a_len = a.size() + (a_tail ? 1 : 0);
  const std::size_t b_len = b.size() + (b_tail ? 1 : 0);
  const std::size_t n = std::min(a_len, b_len);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& x = i < a.size() ? a[i] : *a_tail;
    const std::string& y = i < b.size() ? b[i] : *b_tail;
    if (x != y) return x < y;
  }
  return a_len < b_len;
}

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return seq_less(a.tokens, nullptr, b.tokens, nullptr);
}

TokenSeq search(const ScoringModel& model, const TokenSeq& source, const TokenSeq& previous,
                double beta, std::size_t beam, std::size_t cap) {
  if (beam < 1) throw ValidationError("beam must be at least 1");
  std::vector<Hypothesis> finished;
  std::vector<Live> live;
  live.push_back(Live{TokenSeq{}, 0.0, !previous.empty()});
  if (cap == 0) return {};

  std::vector<Candidate> candidates;
  std::vector<Distribution> dists;
  while (!live.empty()) {
    candidates.clear();
    dists.clear();
    dists.reserve(live.size());
    for (std::size_t h = 0; h < live.size(); ++h) {
      const Live& hyp = live[h];
      std::optional<std::string> forced;
      if (hyp.following && hyp.tokens.size() < previous.size()) forced = previous[hyp.tokens.size()];
      dists.push_back(bias_distribution(model.next_distribution(source.span(), hyp.tokens.span()),
                                        forced, beta));
      const Distribution& dist = dists.back();
      if (dist.eos > 0.0) candidates.push_back({h, nullptr, hyp.score + std::log(dist.eos), false});
      for (const auto& e : dist.tokens) {
        if (!(e.prob > 0.0)) continue;
        const bool still_following =
            forced && e.token == *forced && hyp.tokens.size() + 1 < previous.size();
        candidates.push_back({h, &e.token, hyp.score + std::log(e.prob), still_following});
      }
    }
    if (candidates.empty()) break;

    const auto order = [&](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return seq_less(live[a.parent].tokens, a.token, live[b.parent].tokens, b.token);
    };
    const std::size_t keep = std::min(beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), order);

    std::vector<Live> next;
    next.reserve(keep);
    for (std::size_t c = 0; c < keep; ++c) {
      const Candidate& cand = candidates[c];
      if (cand.token == nullptr) {
        finished.push_back({live[cand.parent].tokens, cand.score, false});
        continue;
      }
      TokenSeq tokens = live[cand.parent].tokens;
      tokens.push_back(*cand.token);
      if (tokens.size() >= cap) {
        finished.push_back({std::move(tokens), cand.score, false});
      } else {
        next.push_back({std::move(tokens), cand.score, cand.following});
      }
    }
    live = std::move(next);

    // Scores never increase (every factor is <= 1), so once a finished
    // hypothesis strictly beats every live one the search is decided.
    if (!finished.empty() && !live.empty()) {
      const auto best = std::min_element(finished.begin(), finished.end(), better);
      double best_live = -std::numeric_limits<double>::infinity();
      for (const auto& l : live) best_live = std::max(best_live, l.score);
      if (best->score > best_live) break;
    }
  }
  if (finished.empty()) return {};
  return std::min_element(finished.begin(), finished.end(), better)->tokens;
}

}  // namespace

TokenSeq beam_decode(const ScoringModel& model, const TokenSeq& source, std::size_t beam,
                     const DecodeConfig& config) {
  return search(model, source, TokenSeq{}, 0.0, beam, config.max_length(source.size()));
}

TokenSeq biased_beam_decode(const ScoringModel& model, const TokenSeq& source,
                            const TokenSeq& previous_output, const DecodeConfig& config) {
  config.validate();
  return search(model, source, previous_output, config.beta, config.beam,
                config.max_length(source.size()));
}

TokenSeq waitk_truncate(const TokenSeq& output, std::size_t source_prefix_len, std::size_t k) {
  const std::size_t shown = source_prefix_len > k ? source_prefix_len - k : 0;
  return output.prefix(shown);
}

}  // namespace retrans
