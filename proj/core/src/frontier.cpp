#include "retrans/frontier.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "retrans/error.hpp"
#include "retrans/metrics.hpp"
#include "retrans/simulate.hpp"

namespace retrans {
namespace {

const std::vector<double> kDefaultBetas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
const std::vector<std::size_t> kDefaultKs = {1, 2, 4, 6, 8, 10, 15, 20, 30};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("<grid>", 0, "bad " + std::string(what) + " value \"" + std::string(text) + "\"");
  }
  return value;
}

bool is_no_revision(const GridConfig& c) { return c.beta == 1.0; }

}  // namespace

std::string_view to_string(Split split) noexcept { return split == Split::kDev ? "dev" : "test"; }

Split parse_split(std::string_view name) {
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split \"" + std::string(name) + "\"");
}

std::vector<GridConfig> default_grid(std::size_t beam) {
  std::vector<GridConfig> grid;
  for (double beta : kDefaultBetas) {
    for (std::size_t k : kDefaultKs) grid.push_back({beta, k, beam});
  }
  return grid;
}

std::vector<GridConfig> parse_grid(std::string_view spec, std::size_t default_beam) {
  spec = trim(spec);
  if (spec.empty() || spec == "default") return default_grid(default_beam);
  std::vector<double> betas = kDefaultBetas;
  std::vector<std::size_t> ks = kDefaultKs;
  std::vector<std::size_t> beams = {default_beam};
  std::set<std::string> seen;
  for (std::string_view axis : split(spec, ';')) {
    axis = trim(axis);
    if (axis.empty()) continue;
    const auto eq = axis.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("<grid>", 0, "expected name=values, got \"" + std::string(axis) + "\"");
    }
    const std::string name(trim(axis.substr(0, eq)));
    if (!seen.insert(name).second) throw ParseError("<grid>", 0, "axis \"" + name + "\" repeated");
    const auto values = split(axis.substr(eq + 1), ',');
    if (name == "beta") {
      betas.clear();
      for (auto v : values) {
        const double b = parse_number<double>(v, "beta");
        if (!(b >= 0.0 && b <= 1.0)) throw ParseError("<grid>", 0, "beta outside [0, 1]");
        betas.push_back(b);
      }
    } else if (name == "k") {
      ks.clear();
      for (auto v : values) ks.push_back(parse_number<std::size_t>(v, "k"));
    } else if (name == "beam") {
      beams.clear();
      for (auto v : values) {
        const auto b = parse_number<std::size_t>(v, "beam");
        if (b == 0) throw ParseError("<grid>", 0, "beam must be at least 1");
        beams.push_back(b);
      }
    } else {
      throw ParseError("<grid>", 0, "unknown axis \"" + name + "\"");
    }
  }
  std::set<GridConfig> unique;
  for (double beta : betas) {
    for (std::size_t k : ks) {
      for (std::size_t beam : beams) unique.insert({beta, k, beam});
    }
  }
  return {unique.begin(), unique.end()};
}

std::vector<SweepPoint> sweep(const ScoringModel& model, const Corpus& dev, const Corpus& test,
                              const std::vector<GridConfig>& grid, const SweepOptions& options) {
  if (grid.empty()) throw ValidationError("empty sweep grid");
  for (const Corpus* c : {&dev, &test}) {
    if (c->sources.empty()) throw ValidationError("empty sweep corpus");
    if (c->sources.size() != c->references.size()) {
      throw ValidationError("corpus has " + std::to_string(c->sources.size()) + " sources but " +
                            std::to_string(c->references.size()) + " references");
    }
  }
  if (std::set<GridConfig>(grid.begin(), grid.end()).size() != grid.size()) {
    throw ValidationError("sweep grid contains duplicate configurations");
  }

  std::vector<SweepPoint> points(grid.size() * 2);
  const auto run_one = [&](std::size_t task) {
    const GridConfig& gc = grid[task / 2];
    const Split split = task % 2 == 0 ? Split::kDev : Split::kTest;
    const Corpus& corpus = split == Split::kDev ? dev : test;
    DecodeConfig config;
    config.beta = gc.beta;
    config.k = gc.k;
    config.beam = gc.beam;
    config.max_len_factor = options.max_len_factor;
    config.max_len_slack = options.max_len_slack;
    try {
      const auto ptls = simulate_corpus(model, corpus.sources, Policy::kRetranslate, config);
      const EvalReport report = evaluate_corpus(ptls, corpus.references);
      points[task] = SweepPoint{gc, split, report.bleu, report.dal, report.ne};
    } catch (const Error&) {
      rethrow_with_context("config beta=" + std::to_string(gc.beta) + " k=" + std::to_string(gc.k) +
                           " beam=" + std::to_string(gc.beam) + " " + std::string(to_string(split)));
    }
  };

  const std::size_t tasks = points.size();
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, tasks);
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> workers;
      for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
          for (std::size_t t = next++; t < tasks; t = next++) {
            try {
              run_one(t);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = tasks;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.config != b.config) return a.config < b.config;
    return a.split < b.split;
  });
  return points;
}

std::vector<SweepPoint> select_split(const std::vector<SweepPoint>& points, Split split) {
  std::vector<SweepPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out),
               [&](const SweepPoint& p) { return p.split == split; });
  return out;
}

std::vector<SweepPoint> filter_by_ne(const std::vector<SweepPoint>& points, double threshold) {
  std::vector<SweepPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out),
               [&](const SweepPoint& p) { return p.ne < threshold; });
  return out;
}

std::vector<SweepPoint> pareto_frontier(const std::vector<SweepPoint>& points) {
  std::vector<SweepPoint> sorted = points;
  std::sort(sorted.begin(), sorted.end(), [](const SweepPoint& a, const SweepPoint& b) {
    if (a.dal != b.dal) return a.dal < b.dal;
    if (a.bleu != b.bleu) return a.bleu > b.bleu;
    return a.config < b.config;
  });
  // A point survives iff it beats the BLEU of every point at lower-or-equal
  // DAL seen before it; equal (DAL, BLEU) duplicates after the first fail.
  std::vector<SweepPoint> frontier;
  for (const auto& p : sorted) {
    if (frontier.empty() || p.bleu > frontier.back().bleu) frontier.push_back(p);
  }
  return frontier;
}

FrontierCurve project(const std::vector<SweepPoint>& frontier_dev,
                      const std::vector<SweepPoint>& all_points) {
  std::map<GridConfig, const SweepPoint*> tests;
  for (const auto& p : all_points) {
    if (p.split == Split::kTest) tests[p.config] = &p;
  }
  FrontierCurve curve;
  for (const auto& d : frontier_dev) {
    const auto it = tests.find(d.config);
    if (it == tests.end()) {
      throw ValidationError("no test point for frontier config beta=" + std::to_string(d.config.beta) +
                            " k=" + std::to_string(d.config.k) +
                            " beam=" + std::to_string(d.config.beam));
    }
    curve.push_back({d.config, d, *it->second});
  }
  std::sort(curve.begin(), curve.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.dev.dal != b.dev.dal) return a.dev.dal < b.dev.dal;
    return a.config < b.config;
  });
  return curve;
}

double ne_stability(const std::vector<SweepPoint>& dev_points,
                    const std::vector<SweepPoint>& test_points) {
  std::map<GridConfig, double> test_ne;
  for (const auto& p : test_points) test_ne[p.config] = p.ne;
  double sum = 0.0;
  std::size_t matched = 0;
  for (const auto& p : dev_points) {
    if (is_no_revision(p.config)) continue;
    const auto it = test_ne.find(p.config);
    if (it == test_ne.end()) continue;
    sum += std::abs(p.ne - it->second);
    ++matched;
  }
  if (matched == 0) throw ValidationError("no matching non-zero-erasure configs across splits");
  return sum / static_cast<double>(matched);
}

FrontierCurve low_revision_curve(const std::vector<SweepPoint>& points, double ne_threshold) {
  return project(pareto_frontier(filter_by_ne(select_split(points, Split::kDev), ne_threshold)),
                 points);
}

FrontierCurve no_revision_curve(const std::vector<SweepPoint>& points) {
  std::vector<SweepPoint> dev;
  for (const auto& p : points) {
    if (p.split == Split::kDev && is_no_revision(p.config)) dev.push_back(p);
  }
  return project(pareto_frontier(dev), points);
}

}  // namespace retrans
