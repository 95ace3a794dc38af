#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "retrans/error.hpp"
#include "retrans/metrics.hpp"
#include "drugs_example.hpp"

using namespace retrans;

namespace {

DelayVector make_delays(std::vector<std::size_t> g, std::size_t source_len) {
  DelayVector d;
  d.target_len = g.size();
  d.g = std::move(g);
  d.source_len = source_len;
  return d;
}

}  // namespace

TEST(ContentDelay, DrugsExample) {
  const auto d = content_delay(test::drugs_ptl());
  EXPECT_EQ(d.g, (std::vector<std::size_t>{1, 4, 6, 7, 7, 7, 7, 7}));
  EXPECT_EQ(d.source_len, 7u);
  EXPECT_EQ(d.target_len, 8u);
}

TEST(ContentDelay, SingleStepFinalizesEverything) {
  PrefixTranslationList p{"one", TokenSeq{"x"}, {TokenSeq{"a", "b", "c"}}};
  EXPECT_EQ(content_delay(p).g, (std::vector<std::size_t>{1, 1, 1}));
}

TEST(ContentDelay, EmptyFinalOutputIsAnError) {
  PrefixTranslationList p{"e", TokenSeq{"x", "y"}, {TokenSeq{"a"}, TokenSeq{}}};
  try {
    content_delay(p);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no final content"), std::string::npos);
  }
}

TEST(ContentDelay, OverlongIntermediateTokensAreIgnored) {
  PrefixTranslationList p{"o", TokenSeq{"x", "y"}, {TokenSeq{"a", "b", "c"}, TokenSeq{"a"}}};
  EXPECT_EQ(content_delay(p).g, (std::vector<std::size_t>{1}));
}

TEST(ContentDelay, MatchesDefinitionOnRandomPtls) {
  test::Gen gen(2024);
  for (int n = 0; n < 3000; ++n) {
    const auto p = gen.ptl(7, 7, 3);
    const auto d = content_delay(p);
    EXPECT_EQ(d.g, oracle::content_delay(p));
    for (std::size_t j = 0; j < d.g.size(); ++j) {
      EXPECT_GE(d.g[j], 1u);
      EXPECT_LE(d.g[j], p.source_len());
      if (j > 0) EXPECT_LE(d.g[j - 1], d.g[j]);
    }
  }
}

TEST(ContentDelay, EqualsFirstEmissionForAppendOnly) {
  test::Gen gen(7);
  for (int n = 0; n < 2000; ++n) {
    const auto a = gen.append_only_ptl(8, 8, 4);
    const auto d = content_delay(a.ptl);
    EXPECT_EQ(d.g, a.emission);
    EXPECT_DOUBLE_EQ(dal(d), dal(make_delays(a.emission, a.ptl.source_len())));
  }
}

TEST(Dal, IdealWaitOneIsOne) {
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<std::size_t> g;
    for (std::size_t j = 1; j <= n; ++j) g.push_back(j);
    EXPECT_DOUBLE_EQ(dal(make_delays(g, n)), 1.0);
  }
}

TEST(Dal, FullSentenceIsSourceLength) {
  for (std::size_t n = 1; n <= 12; ++n) {
    EXPECT_DOUBLE_EQ(dal(make_delays(std::vector<std::size_t>(n, n), n)), static_cast<double>(n));
  }
}

TEST(Dal, DrugsExample) {
  // 3.78125 = 121/32; evaluated independently from the g' recurrence.
  EXPECT_NEAR(dal(make_delays({1, 4, 6, 7, 7, 7, 7, 7}, 7)), 3.78125, 1e-12);
}

TEST(Dal, EmptyTargetThrows) {
  EXPECT_THROW(dal(make_delays({}, 3)), ValidationError);
}

TEST(Dal, AgreesWithRecurrenceOracleAndIsMonotone) {
  test::Gen gen(3);
  for (int n = 0; n < 3000; ++n) {
    const std::size_t I = gen.range(1, 10);
    const std::size_t J = gen.range(1, 10);
    std::vector<std::size_t> g;
    std::size_t lo = 1;
    for (std::size_t j = 0; j < J; ++j) g.push_back(lo = gen.range(lo, I));
    const double base = dal(make_delays(g, I));
    EXPECT_NEAR(base, oracle::dal(g, I), 1e-12);

    const std::size_t pos = gen.range(0, J - 1);
    if (g[pos] < I) {
      auto bumped = g;
      ++bumped[pos];
      for (std::size_t j = pos + 1; j < J; ++j) bumped[j] = std::max(bumped[j], bumped[j - 1]);
      EXPECT_GE(dal(make_delays(bumped, I)), base - 1e-12);
    }
  }
}

TEST(NormalizedErasure, DrugsExample) {
  const auto p = test::drugs_ptl();
  EXPECT_EQ(erasures(p), (std::vector<std::size_t>{0, 0, 0, 1, 3, 4, 5}));
  EXPECT_EQ(normalized_erasure(p), 1.625);
}

TEST(NormalizedErasure, HandExample) {
  PrefixTranslationList p{"h", TokenSeq{"x", "y", "z"}, {TokenSeq{"a", "b"}, TokenSeq{"c"}, TokenSeq{"c"}}};
  EXPECT_EQ(normalized_erasure(p), 2.0);
}

TEST(NormalizedErasure, EmptyFinal) {
  PrefixTranslationList quiet{"q", TokenSeq{"x", "y"}, {TokenSeq{}, TokenSeq{}}};
  EXPECT_EQ(normalized_erasure(quiet), 0.0);
  PrefixTranslationList retracted{"r", TokenSeq{"x", "y"}, {TokenSeq{"a"}, TokenSeq{}}};
  EXPECT_THROW(normalized_erasure(retracted), ValidationError);
}

TEST(EvaluateCorpus, DrugsExampleSingleSentence) {
  const auto report = evaluate_corpus({test::drugs_ptl()}, {test::drugs_reference()});
  EXPECT_EQ(report.ne, 1.625);
  EXPECT_NEAR(report.dal, 3.78125, 1e-12);
  ASSERT_EQ(report.sentences.size(), 1u);
  EXPECT_EQ(report.sentences[0].id, "drugs");
  EXPECT_EQ(report.sentences[0].final_len, 8u);
  EXPECT_EQ(report.sentences[0].erased, 13u);
  EXPECT_NEAR(report.bleu, oracle::corpus_bleu({test::drugs_ptl().final_output()},
                                               {test::drugs_reference()}),
              1e-9);
}

TEST(EvaluateCorpus, AppendOnlyCorpusHasZeroNe) {
  test::Gen gen(8);
  std::vector<PrefixTranslationList> ptls;
  std::vector<TokenSeq> refs;
  for (int n = 0; n < 20; ++n) {
    ptls.push_back(gen.append_only_ptl(6, 6, 4).ptl);
    refs.push_back(gen.seq(1, 6, 4));
  }
  EXPECT_EQ(evaluate_corpus(ptls, refs).ne, 0.0);
}

TEST(EvaluateCorpus, DuplicatingTheCorpusKeepsDalAndNe) {
  test::Gen gen(21);
  std::vector<PrefixTranslationList> ptls;
  std::vector<TokenSeq> refs;
  for (int n = 0; n < 15; ++n) {
    ptls.push_back(gen.ptl(6, 6, 3));
    refs.push_back(gen.seq(1, 6, 3));
  }
  auto ptls2 = ptls;
  auto refs2 = refs;
  ptls2.insert(ptls2.end(), ptls.begin(), ptls.end());
  refs2.insert(refs2.end(), refs.begin(), refs.end());
  const auto once = evaluate_corpus(ptls, refs);
  const auto twice = evaluate_corpus(ptls2, refs2);
  EXPECT_NEAR(once.dal, twice.dal, 1e-12);
  EXPECT_NEAR(once.ne, twice.ne, 1e-12);
  EXPECT_NEAR(once.bleu, twice.bleu, 1e-9);
}

TEST(EvaluateCorpus, MicroNeMacroDal) {
  PrefixTranslationList a{"a", TokenSeq{"x", "y"}, {TokenSeq{"p"}, TokenSeq{"q"}}};          // erased 1, J 1
  PrefixTranslationList b{"b", TokenSeq{"x", "y"}, {TokenSeq{}, TokenSeq{"q", "r", "s"}}};   // erased 0, J 3
  const auto report = evaluate_corpus({a, b}, {TokenSeq{"q"}, TokenSeq{"q", "r", "s"}});
  EXPECT_DOUBLE_EQ(report.ne, 1.0 / 4.0);
  const double dal_a = dal(content_delay(a));
  const double dal_b = dal(content_delay(b));
  EXPECT_DOUBLE_EQ(report.dal, (dal_a + dal_b) / 2.0);
}

TEST(EvaluateCorpus, ErrorsNameTheSentence) {
  PrefixTranslationList bad{"s42", TokenSeq{"x"}, {TokenSeq{}}};
  try {
    evaluate_corpus({bad}, {TokenSeq{"a"}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("s42"), std::string::npos);
  }
  EXPECT_THROW(evaluate_corpus({test::drugs_ptl()}, {}), ValidationError);
}
