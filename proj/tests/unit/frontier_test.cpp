#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "generators.hpp"
#include "oracles.hpp"
#include "retrans/error.hpp"
#include "retrans/frontier.hpp"
#include "retrans/metrics.hpp"
#include "retrans/simulate.hpp"

using namespace retrans;
using test::Gen;

namespace {

SweepPoint point(double beta, std::size_t k, double bleu, double dal, double ne,
                 Split split = Split::kDev) {
  return SweepPoint{GridConfig{beta, k, 1}, split, bleu, dal, ne};
}

Corpus toy_corpus(Gen& gen, std::size_t n) {
  Corpus c;
  for (std::size_t s = 0; s < n; ++s) {
    c.sources.push_back(gen.seq(2, 8, 6));
    c.references.push_back(gen.seq(2, 10, 4));
  }
  return c;
}

}  // namespace

TEST(Grid, DefaultHas54Configs) {
  const auto grid = default_grid();
  EXPECT_EQ(grid.size(), 54u);
  EXPECT_EQ(grid.front(), (GridConfig{0.0, 1, 1}));
  EXPECT_EQ(grid.back(), (GridConfig{1.0, 30, 1}));
  EXPECT_EQ(parse_grid("default").size(), 54u);
  EXPECT_EQ(parse_grid("").size(), 54u);
}

TEST(Grid, Parsing) {
  const auto grid = parse_grid("beta=0,0.5;k=1,3;beam=2");
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid[0], (GridConfig{0.0, 1, 2}));
  EXPECT_EQ(grid[3], (GridConfig{0.5, 3, 2}));
  EXPECT_EQ(parse_grid("k=4", 3).size(), 6u);
  EXPECT_THROW(parse_grid("beta=2"), ParseError);
  EXPECT_THROW(parse_grid("gamma=1"), ParseError);
  EXPECT_THROW(parse_grid("beta=x"), ParseError);
  EXPECT_THROW(parse_grid("k="), ParseError);
}

TEST(FilterByNe, IsStrict) {
  const std::vector<SweepPoint> pts = {point(0, 1, 1, 1, 0.0), point(0, 2, 1, 1, 0.15),
                                       point(0, 4, 1, 1, 0.3), point(0, 6, 1, 1, 0.2)};
  const auto kept = filter_by_ne(pts, 0.2);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].config.k, 1u);
  EXPECT_EQ(kept[1].config.k, 2u);
  EXPECT_TRUE(filter_by_ne(pts, 0.0).empty());
  EXPECT_EQ(filter_by_ne(pts, kNoThreshold), pts);
}

TEST(Pareto, Examples) {
  EXPECT_EQ(pareto_frontier({point(0, 1, 5, 5, 0)}).size(), 1u);
  const auto f = pareto_frontier({point(0, 1, 10, 2, 0), point(0, 2, 9, 3, 0)});
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].config.k, 1u);
  const auto tie = pareto_frontier({point(0.2, 1, 10, 2, 0), point(0, 4, 10, 2, 0)});
  ASSERT_EQ(tie.size(), 1u);
  EXPECT_EQ(tie[0].config, (GridConfig{0.0, 4, 1}));
  const auto equal_dal = pareto_frontier({point(0, 1, 9, 2, 0), point(0, 2, 10, 2, 0)});
  ASSERT_EQ(equal_dal.size(), 1u);
  EXPECT_EQ(equal_dal[0].bleu, 10);
  EXPECT_TRUE(pareto_frontier({}).empty());
}

TEST(Pareto, MatchesBruteForce) {
  Gen gen(103);
  for (int n = 0; n < 500; ++n) {
    // Distinct configs, as in a sweep; coarse metrics so exact ties occur.
    std::vector<SweepPoint> pts;
    std::set<std::pair<std::size_t, std::size_t>> used;
    const std::size_t count = gen.range(1, 60);
    while (pts.size() < count) {
      const std::size_t b = gen.range(0, 5), k = gen.range(1, 30);
      if (!used.insert({b, k}).second) continue;
      pts.push_back(point(b / 5.0, k, static_cast<double>(gen.range(0, 12)),
                          static_cast<double>(gen.range(1, 12)) / 2.0, gen.unit()));
    }
    const auto got = pareto_frontier(pts);
    const auto want = oracle::pareto(pts);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t p = 0; p < got.size(); ++p) EXPECT_EQ(got[p], want[p]);
    for (std::size_t p = 1; p < got.size(); ++p) {
      EXPECT_LT(got[p - 1].dal, got[p].dal);
      EXPECT_LT(got[p - 1].bleu, got[p].bleu);
    }
  }
}

TEST(Project, AttachesTestMetrics) {
  const std::vector<SweepPoint> all = {point(0, 1, 10, 2, 0.1), point(0, 1, 12, 2.5, 0.2, Split::kTest),
                                       point(0, 2, 9, 1, 0.1), point(0, 2, 8, 1.5, 0.3, Split::kTest)};
  const auto curve = project(pareto_frontier(select_split(all, Split::kDev)), all);
  ASSERT_EQ(curve.size(), 2u);
  EXPECT_EQ(curve[0].config.k, 2u);
  EXPECT_EQ(curve[0].test.bleu, 8);
  EXPECT_EQ(curve[1].test.dal, 2.5);
  EXPECT_THROW(project({point(0, 9, 1, 1, 0)}, all), ValidationError);
}

TEST(NeStability, Examples) {
  EXPECT_NEAR(ne_stability({point(0, 1, 0, 0, 0.1)}, {point(0, 1, 0, 0, 0.14, Split::kTest)}), 0.04, 1e-12);
  const std::vector<SweepPoint> dev = {point(0, 1, 0, 0, 0.1), point(0.4, 2, 0, 0, 0.3), point(1, 1, 0, 0, 0)};
  std::vector<SweepPoint> same = dev;
  for (auto& p : same) p.split = Split::kTest;
  EXPECT_EQ(ne_stability(dev, same), 0.0);
  std::vector<SweepPoint> test = same;
  test[0].ne = 0.2;
  test[1].ne = 0.2;
  test[2].ne = 5.0;  // beta = 1 is excluded
  EXPECT_NEAR(ne_stability(dev, test), 0.1, 1e-12);
  EXPECT_THROW(ne_stability({point(1, 1, 0, 0, 0)}, {point(1, 1, 0, 0, 0, Split::kTest)}), ValidationError);
}

TEST(Sweep, DevEqualsTestAndFullBetaNeverErases) {
  Gen gen(107);
  const Corpus corpus = toy_corpus(gen, 6);
  SeededRandomModel model(3, gen.vocab(5, 5));
  const auto grid = parse_grid("beta=0,0.6,1;k=1,2");
  const auto pts = sweep(model, corpus, corpus, grid);
  ASSERT_EQ(pts.size(), 12u);
  for (std::size_t p = 0; p < pts.size(); p += 2) {
    EXPECT_EQ(pts[p].split, Split::kDev);
    EXPECT_EQ(pts[p + 1].split, Split::kTest);
    EXPECT_EQ(pts[p].config, pts[p + 1].config);
    EXPECT_EQ(pts[p].bleu, pts[p + 1].bleu);
    EXPECT_EQ(pts[p].dal, pts[p + 1].dal);
    EXPECT_EQ(pts[p].ne, pts[p + 1].ne);
    if (pts[p].config.beta == 1.0) EXPECT_EQ(pts[p].ne, 0.0);
  }
  EXPECT_EQ(ne_stability(select_split(pts, Split::kDev), select_split(pts, Split::kTest)), 0.0);
}

TEST(Sweep, ThreadedMatchesSerialAndDirectEvaluation) {
  Gen gen(109);
  const Corpus dev = toy_corpus(gen, 5);
  const Corpus test = toy_corpus(gen, 7);
  SeededRandomModel model(11, gen.vocab(4, 4));
  const auto grid = parse_grid("beta=0,0.4;k=1,4;beam=1,2");
  const auto serial = sweep(model, dev, test, grid);
  SweepOptions opts;
  opts.threads = 4;
  EXPECT_EQ(sweep(model, dev, test, grid, opts), serial);

  for (const auto& p : select_split(serial, Split::kTest)) {
    DecodeConfig cfg;
    cfg.beta = p.config.beta;
    cfg.k = p.config.k;
    cfg.beam = p.config.beam;
    const auto report =
        evaluate_corpus(simulate_corpus(model, test.sources, Policy::kRetranslate, cfg), test.references);
    EXPECT_EQ(p.bleu, report.bleu);
    EXPECT_EQ(p.dal, report.dal);
    EXPECT_EQ(p.ne, report.ne);
  }
}

TEST(Curves, LowAndNoRevision) {
  std::vector<SweepPoint> pts;
  for (const auto& [beta, k, bleu, dal, ne] :
       std::vector<std::tuple<double, std::size_t, double, double, double>>{
           {0.0, 1, 30, 2, 0.5}, {0.6, 1, 25, 2.5, 0.1}, {1.0, 1, 20, 3, 0}, {1.0, 2, 22, 4, 0}}) {
    pts.push_back(point(beta, k, bleu, dal, ne));
    pts.push_back(point(beta, k, bleu - 1, dal, ne, Split::kTest));
  }
  const auto low = low_revision_curve(pts, 0.2);
  ASSERT_EQ(low.size(), 1u);
  EXPECT_EQ(low[0].config.beta, 0.6);
  EXPECT_EQ(low[0].test.bleu, 24);
  EXPECT_EQ(low_revision_curve(pts, kNoThreshold).size(), 1u);
  EXPECT_EQ(low_revision_curve(pts, kNoThreshold)[0].config.beta, 0.0);
  const auto none = no_revision_curve(pts);
  ASSERT_EQ(none.size(), 2u);
  EXPECT_EQ(none[0].config.k, 1u);
  EXPECT_EQ(none[1].config.k, 2u);
}
