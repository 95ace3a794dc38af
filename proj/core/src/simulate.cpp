#include "retrans/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "retrans/error.hpp"

namespace retrans {

std::string_view to_string(Policy policy) noexcept {
  return policy == Policy::kRetranslate ? "retranslate" : "stream";
}

Policy parse_policy(std::string_view name) {
  if (name == "retranslate") return Policy::kRetranslate;
  if (name == "stream" || name == "stream_waitk") return Policy::kStreamWaitK;
  throw ValidationError("unknown policy \"" + std::string(name) + "\"");
}

PrefixTranslationList retranslate_ptl(const ScoringModel& model, const TokenSeq& source,
                                      const DecodeConfig& config, std::string id) {
  if (source.empty()) throw ValidationError("cannot simulate an empty source");
  config.validate();
  PrefixTranslationList ptl;
  ptl.id = std::move(id);
  ptl.source = source;
  ptl.outputs.reserve(source.size());
  TokenSeq displayed;
  for (std::size_t i = 1; i <= source.size(); ++i) {
    TokenSeq full;
    try {
      full = biased_beam_decode(model, source.prefix(i), displayed, config);
    } catch (const Error&) {
      rethrow_with_context("prefix " + std::to_string(i));
    }
    displayed = i == source.size() ? std::move(full) : waitk_truncate(full, i, config.k);
    ptl.outputs.push_back(displayed);
  }
  return ptl;
}

PrefixTranslationList stream_waitk_ptl(const ScoringModel& model, const TokenSeq& source,
                                       std::size_t k, const DecodeConfig& config, std::string id) {
  if (source.empty()) throw ValidationError("cannot simulate an empty source");
  PrefixTranslationList ptl;
  ptl.id = std::move(id);
  ptl.source = source;
  ptl.outputs.reserve(source.size());

  TokenSeq committed;
  bool ended = false;
  // Appends the argmax token for (source prefix, committed); false on EOS.
  // Same tie rule as greedy_decode.
  const auto write = [&](const TokenSeq& src) {
    const Distribution dist = model.next_distribution(src.span(), committed.span());
    const std::string* best = nullptr;
    double best_p = dist.eos;
    for (const auto& e : dist.tokens) {
      if (e.prob > best_p) {
        best = &e.token;
        best_p = e.prob;
      }
    }
    if (best == nullptr || !(best_p > 0.0)) return false;
    committed.push_back(*best);
    return true;
  };

  for (std::size_t i = 1; i <= source.size(); ++i) {
    const TokenSeq src = source.prefix(i);
    const bool last = i == source.size();
    const std::size_t target = last ? config.max_length(i) : (i > k ? i - k : 0);
    while (!ended && committed.size() < target) {
      if (!write(src)) ended = true;
    }
    ptl.outputs.push_back(committed);
  }
  return ptl;
}

PolicyRun run_policy(const ScoringModel& model, const TokenSeq& source, Policy policy,
                     const DecodeConfig& config, std::string id) {
  PolicyRun run;
  run.config = config;
  run.policy = policy;
  run.ptl = policy == Policy::kRetranslate
                ? retranslate_ptl(model, source, config, std::move(id))
                : stream_waitk_ptl(model, source, config.k, config, std::move(id));
  return run;
}

std::vector<PrefixTranslationList> simulate_corpus(const ScoringModel& model,
                                                   const std::vector<TokenSeq>& sources,
                                                   Policy policy, const DecodeConfig& config,
                                                   std::size_t threads) {
  std::vector<PrefixTranslationList> out(sources.size());
  const auto run_one = [&](std::size_t n) {
    try {
      out[n] = run_policy(model, sources[n], policy, config, std::to_string(n + 1)).ptl;
    } catch (const Error&) {
      rethrow_with_context("sentence " + std::to_string(n + 1));
    }
  };

  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, sources.size()));
  if (threads == 1) {
    for (std::size_t n = 0; n < sources.size(); ++n) run_one(n);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t n = next++; n < sources.size(); n = next++) {
          try {
            run_one(n);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = sources.size();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace retrans
