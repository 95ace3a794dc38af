#include <gtest/gtest.h>

#include <set>

#include "generators.hpp"
#include "oracles.hpp"
#include "retrans/augment.hpp"
#include "retrans/error.hpp"

using namespace retrans;
using test::Gen;

namespace {

SentencePair pair_of_lengths(std::size_t I, std::size_t J) {
  SentencePair p;
  for (std::size_t i = 0; i < I; ++i) p.source.push_back("s" + std::to_string(i));
  for (std::size_t j = 0; j < J; ++j) p.target.push_back("t" + std::to_string(j));
  return p;
}

AlignmentSet random_alignment(Gen& gen, std::size_t I, std::size_t J) {
  AlignmentSet a;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t n = gen.range(0, I + J); n > 0; --n) {
    seen.insert({gen.range(0, I - 1), gen.range(0, J - 1)});
  }
  a.links.assign(seen.begin(), seen.end());
  return a;
}

std::vector<SentencePair> random_corpus(Gen& gen, std::size_t n) {
  std::vector<SentencePair> corpus;
  for (std::size_t s = 0; s < n; ++s) corpus.push_back({gen.seq(1, 12, 20), gen.seq(1, 12, 20)});
  return corpus;
}

}  // namespace

TEST(Proportional, TargetLengths) {
  EXPECT_EQ(proportional_target_len(15, 12, 5), 4u);
  EXPECT_EQ(proportional_target_len(7, 3, 1), 1u);
  EXPECT_EQ(proportional_target_len(9, 9, 9), 9u);
  EXPECT_EQ(proportional_target_len(4, 3, 2), 2u);  // 1.5 rounds up
  EXPECT_EQ(proportional_target_len(4, 1, 1), 1u);
}

TEST(Proportional, FifteenByTwelveAndFullLength) {
  const auto pair = pair_of_lengths(15, 12);
  const auto p = proportional_prefix(pair, 5);
  EXPECT_EQ(p.source.size(), 5u);
  EXPECT_EQ(p.target.size(), 4u);
  EXPECT_EQ(proportional_prefix(pair, 15).target, pair.target);
  EXPECT_THROW(proportional_prefix(pair, 0), ValidationError);
  EXPECT_THROW(proportional_prefix(pair, 16), ValidationError);
}

TEST(Proportional, OutputsArePrefixes) {
  Gen gen(71);
  for (int n = 0; n < 2000; ++n) {
    const std::size_t I = gen.range(1, 30), J = gen.range(1, 30);
    const auto pair = pair_of_lengths(I, J);
    const std::size_t ls = gen.range(1, I);
    const auto p = proportional_prefix(pair, ls);
    EXPECT_TRUE(pair.source.starts_with(p.source));
    EXPECT_TRUE(pair.target.starts_with(p.target));
    EXPECT_GE(p.target.size(), 1u);
    EXPECT_LE(p.target.size(), J);
    // round-half-up of ls * J / I, checked in exact rational arithmetic
    const std::size_t lt = p.target.size();
    if (lt > 1) {
      EXPECT_LT(2 * ls * J, (2 * lt + 1) * I);
      EXPECT_GE(2 * ls * J, (2 * lt - 1) * I);
    }
  }
}

TEST(Aligned, Examples) {
  const auto pair = pair_of_lengths(3, 3);
  const auto diag = aligned_prefix(pair, AlignmentSet{{{0, 0}, {1, 1}, {2, 2}}}, 3);
  ASSERT_TRUE(diag);
  EXPECT_EQ(diag->target.size(), 3u);

  const auto swapped = aligned_prefix(pair, AlignmentSet{{{0, 1}, {1, 0}, {2, 2}}}, 2);
  ASSERT_TRUE(swapped);
  EXPECT_EQ(swapped->source.size(), 2u);
  EXPECT_EQ(swapped->target.size(), 2u);

  EXPECT_FALSE(aligned_prefix(pair, AlignmentSet{{{0, 2}, {2, 0}}}, 1));
  EXPECT_EQ(aligned_prefix(pair, AlignmentSet{}, 2)->target.size(), 1u);
}

TEST(Aligned, BoundsAreChecked) {
  const auto pair = pair_of_lengths(2, 2);
  EXPECT_THROW(aligned_prefix(pair, AlignmentSet{{{2, 0}}}, 1), ValidationError);
  EXPECT_THROW(aligned_prefix(pair, AlignmentSet{{{0, 5}}}, 1), ValidationError);
}

TEST(Aligned, MatchesExhaustiveSearchAndIsMinimal) {
  Gen gen(73);
  int none = 0;
  for (int n = 0; n < 3000; ++n) {
    const std::size_t I = gen.range(1, 8), J = gen.range(1, 8);
    const auto pair = pair_of_lengths(I, J);
    const auto a = random_alignment(gen, I, J);
    const std::size_t ls = gen.range(1, I);
    const auto got = aligned_prefix(pair, a, ls);
    const auto want = oracle::aligned_target_len(a, J, ls);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (!got) {
      ++none;
      continue;
    }
    EXPECT_EQ(got->target.size(), *want);
    for (const auto& [i, j] : a.links) EXPECT_EQ(i < ls, j < got->target.size());
  }
  EXPECT_GT(none, 100);
}

TEST(Augment, StochasticRate) {
  Gen gen(79);
  std::vector<SentencePair> corpus;
  for (int n = 0; n < 10000; ++n) corpus.push_back(pair_of_lengths(gen.range(1, 20), gen.range(1, 20)));
  AugmentConfig cfg;
  cfg.seed = 1234;
  std::size_t truncated = 0;
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    truncated += draw_prefix(cfg, n, corpus[n].source.size()).truncate;
  }
  const double rate = static_cast<double>(truncated) / static_cast<double>(corpus.size());
  EXPECT_NEAR(rate, 0.5, 0.03);
  EXPECT_EQ(augment_corpus(corpus, cfg).size(), corpus.size());
}

TEST(Augment, DrawIsUniformOverAllLengths) {
  AugmentConfig cfg;
  cfg.seed = 9;
  std::vector<int> counts(6, 0);
  for (std::size_t n = 0; n < 6000; ++n) ++counts[draw_prefix(cfg, n, 5).source_prefix_len];
  EXPECT_EQ(counts[0], 0);
  for (int ls = 1; ls <= 5; ++ls) EXPECT_NEAR(counts[ls], 1200, 150);
}

TEST(Augment, ZeroProbabilityIsIdentity) {
  Gen gen(83);
  const auto corpus = random_corpus(gen, 200);
  AugmentConfig cfg;
  cfg.truncate_prob = 0.0;
  EXPECT_EQ(augment_corpus(corpus, cfg), corpus);
}

TEST(Augment, DuplicateInterleavesFullAndPrefix) {
  Gen gen(89);
  const auto corpus = random_corpus(gen, 100);
  AugmentConfig cfg;
  cfg.mix = MixMode::kDuplicate;
  cfg.seed = 5;
  const auto out = augment_corpus(corpus, cfg);
  ASSERT_EQ(out.size(), 200u);
  for (std::size_t n = 0; n < corpus.size(); ++n) {
    EXPECT_EQ(out[2 * n], corpus[n]);
    EXPECT_TRUE(corpus[n].source.starts_with(out[2 * n + 1].source));
    EXPECT_TRUE(corpus[n].target.starts_with(out[2 * n + 1].target));
  }
}

TEST(Augment, ForcedLengthFifteenByTwelve) {
  AugmentConfig cfg;
  cfg.mix = MixMode::kDuplicate;
  cfg.forced_source_len = 5;
  const auto out = augment_corpus({pair_of_lengths(15, 12)}, cfg);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].source.size(), 5u);
  EXPECT_EQ(out[1].target.size(), 4u);
}

TEST(Augment, SameSeedSameOutput) {
  Gen gen(97);
  const auto corpus = random_corpus(gen, 500);
  AugmentConfig cfg;
  cfg.seed = 42;
  const auto a = augment_corpus(corpus, cfg);
  EXPECT_EQ(a, augment_corpus(corpus, cfg));
  cfg.seed = 43;
  EXPECT_NE(a, augment_corpus(corpus, cfg));
}

TEST(Augment, AlignedModeNeedsAlignments) {
  Gen gen(101);
  const auto corpus = random_corpus(gen, 3);
  AugmentConfig cfg;
  cfg.mode = PrefixMode::kAligned;
  EXPECT_THROW(augment_corpus(corpus, cfg), ValidationError);
  std::vector<AlignmentSet> two(2);
  try {
    augment_corpus(corpus, cfg, &two);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sentence 3"), std::string::npos);
  }
}

TEST(Augment, AlignedModeEmitsFullPairWhenNoClosureExists) {
  const auto pair = pair_of_lengths(3, 3);
  const std::vector<AlignmentSet> crossing{AlignmentSet{{{0, 2}, {2, 0}}}};
  AugmentConfig cfg;
  cfg.mode = PrefixMode::kAligned;
  cfg.truncate_prob = 1.0;
  cfg.forced_source_len = 1;
  EXPECT_EQ(augment_corpus({pair}, cfg, &crossing), (std::vector<SentencePair>{pair}));
  cfg.mix = MixMode::kDuplicate;
  EXPECT_EQ(augment_corpus({pair}, cfg, &crossing), (std::vector<SentencePair>{pair}));
}

TEST(Augment, ConfigParsingAndValidation) {
  EXPECT_EQ(parse_prefix_mode("aligned"), PrefixMode::kAligned);
  EXPECT_EQ(parse_mix_mode("duplicate"), MixMode::kDuplicate);
  EXPECT_THROW(parse_prefix_mode("random"), ValidationError);
  AugmentConfig cfg;
  cfg.truncate_prob = 1.5;
  EXPECT_THROW(cfg.validate(), ValidationError);
}
