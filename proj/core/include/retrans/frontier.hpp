#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "retrans/decode.hpp"
#include "retrans/model.hpp"
#include "retrans/tokens.hpp"

namespace retrans {

enum class Split { kDev, kTest };

std::string_view to_string(Split split) noexcept;
Split parse_split(std::string_view name);

struct GridConfig {
  double beta = 0.0;
  std::size_t k = 0;
  std::size_t beam = 1;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
  friend auto operator<=>(const GridConfig&, const GridConfig&) = default;
};

struct SweepPoint {
  GridConfig config;
  Split split = Split::kDev;
  double bleu = 0.0;
  double dal = 0.0;
  double ne = 0.0;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

/// Beta in {0, 0.2, ..., 1} crossed with k in {1, 2, 4, 6, 8, 10, 15, 20, 30}.
std::vector<GridConfig> default_grid(std::size_t beam = 1);

/// Parses "beta=0,0.5;k=1,2;beam=1" into the cartesian product. Omitted axes
/// take their default values. Throws ParseError.
std::vector<GridConfig> parse_grid(std::string_view spec, std::size_t default_beam = 1);

struct Corpus {
  std::vector<TokenSeq> sources;
  std::vector<TokenSeq> references;
};

struct SweepOptions {
  std::size_t threads = 1;
  double max_len_factor = 2.0;
  std::size_t max_len_slack = 5;
};

/// Re-translates both corpora under every configuration. Output is sorted by
/// (config, split) regardless of evaluation order.
std::vector<SweepPoint> sweep(const ScoringModel& model, const Corpus& dev, const Corpus& test,
                              const std::vector<GridConfig>& grid,
                              const SweepOptions& options = {});

std::vector<SweepPoint> select_split(const std::vector<SweepPoint>& points, Split split);

/// Keeps points with ne < threshold (strict).
std::vector<SweepPoint> filter_by_ne(const std::vector<SweepPoint>& points, double threshold);

/// Points not dominated in (lower DAL, higher BLEU). Exact metric ties keep
/// the smallest config. Result is ordered by ascending DAL.
std::vector<SweepPoint> pareto_frontier(const std::vector<SweepPoint>& points);

struct CurvePoint {
  GridConfig config;
  SweepPoint dev;
  SweepPoint test;
};

/// Dev-optimal configurations with their test metrics, ascending dev DAL.
using FrontierCurve = std::vector<CurvePoint>;

/// Throws ValidationError if a frontier config has no test point.
FrontierCurve project(const std::vector<SweepPoint>& frontier_dev,
                      const std::vector<SweepPoint>& all_points);

/// Mean |ne_dev - ne_test| over configs present in both splits, skipping
/// beta = 1 configs. Throws ValidationError if nothing matches.
double ne_stability(const std::vector<SweepPoint>& dev_points,
                    const std::vector<SweepPoint>& test_points);

/// Low-revision curve: NE filter on dev, frontier, projection to test.
FrontierCurve low_revision_curve(const std::vector<SweepPoint>& points,
                                 double ne_threshold = 0.2);
/// No-revision curve: beta = 1 configs only.
FrontierCurve no_revision_curve(const std::vector<SweepPoint>& points);

inline constexpr double kNoThreshold = std::numeric_limits<double>::infinity();

}  // namespace retrans
