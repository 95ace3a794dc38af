// retrans: evaluate, simulate and tune simultaneous translation policies.
//
// Exit status: 0 success, 1 validation or parse error, 2 I/O or scorer
// protocol error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "retrans/augment.hpp"
#include "retrans/error.hpp"
#include "retrans/frontier.hpp"
#include "retrans/io.hpp"
#include "retrans/manifest.hpp"
#include "retrans/metrics.hpp"
#include "retrans/scorer_client.hpp"
#include "retrans/simulate.hpp"

namespace fs = std::filesystem;
using namespace retrans;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string model_seed_literal(const ScoringModel& model) {
  if (const auto* seeded = dynamic_cast<const SeededRandomModel*>(&model)) {
    return std::to_string(seeded->seed());
  }
  return "null";
}

double parse_threshold(const std::string& text) {
  if (text == "inf" || text == "infinity") return kNoThreshold;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || std::isnan(value)) {
    throw ValidationError("bad --ne-threshold \"" + text + "\"");
  }
  return value;
}

Corpus load_corpus(const fs::path& src, const fs::path& ref) {
  Corpus c;
  c.sources = io::read_token_lines(src);
  c.references = io::read_token_lines(ref);
  if (c.sources.size() != c.references.size()) {
    throw ValidationError(src.string() + " has " + std::to_string(c.sources.size()) + " lines but " +
                          ref.string() + " has " + std::to_string(c.references.size()));
  }
  for (std::size_t i = 0; i < c.sources.size(); ++i) {
    if (c.sources[i].empty()) throw ParseError(src.string(), i + 1, "empty source sentence");
  }
  return c;
}

// --- evaluate -----------------------------------------------------------------

struct EvaluateArgs {
  std::string ptl_file;
  std::string ref_file;
  std::string marker{kDefaultSubwordMarker};
  std::string report;
};

int run_evaluate(const EvaluateArgs& a) {
  auto ptls = io::read_ptls(a.ptl_file);
  auto refs = io::read_token_lines(a.ref_file);
  if (ptls.size() != refs.size()) {
    throw ValidationError(a.ptl_file + " has " + std::to_string(ptls.size()) + " PTLs but " +
                          a.ref_file + " has " + std::to_string(refs.size()) + " references");
  }
  const WarningSink warn = [](const std::string& msg) { std::cerr << "warning: " << msg << "\n"; };
  for (auto& p : ptls) p = merge_ptl(p, a.marker, warn);
  for (auto& r : refs) r = merge_subwords(r, a.marker, warn);

  const EvalReport report = evaluate_corpus(ptls, refs);
  std::cout << "bleu " << io::fixed6(report.bleu) << "\n"
            << "dal " << io::fixed6(report.dal) << "\n"
            << "ne " << io::fixed6(report.ne) << "\n"
            << "sentences " << report.sentences.size() << "\n";
  if (!a.report.empty()) {
    io::write_file(a.report, io::format_report(report));
    RunManifest m;
    m.command = "evaluate";
    m.set_string("subword_marker", a.marker);
    m.add_input(a.ptl_file);
    m.add_input(a.ref_file);
    m.write_beside(a.report);
  }
  return kExitOk;
}

// --- simulate -----------------------------------------------------------------

struct SimulateArgs {
  std::string src_file;
  std::string model;
  std::string policy = "retranslate";
  double beta = 0.0;
  std::size_t k = 0;
  std::size_t beam = 1;
  std::string out;
  std::size_t threads = 1;
};

int run_simulate(const SimulateArgs& a) {
  const Policy policy = parse_policy(a.policy);
  DecodeConfig config;
  config.beta = a.beta;
  config.k = a.k;
  config.beam = a.beam;
  config.validate();
  const auto model = io::load_model(a.model);
  const auto sources = io::read_token_lines(a.src_file);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].empty()) throw ParseError(a.src_file, i + 1, "empty source sentence");
  }
  const auto ptls = simulate_corpus(*model, sources, policy, config, a.threads);
  io::write_file(a.out, io::format_ptls(ptls));

  RunManifest m;
  m.command = "simulate";
  m.set_string("policy", std::string(to_string(policy)));
  m.set("beta", io::fixed6(config.beta));
  m.set("k", std::to_string(config.k));
  m.set("beam", std::to_string(config.beam));
  m.set_string("model", model->describe());
  m.set("seed", model_seed_literal(*model));
  m.set("max_len_factor", io::fixed6(config.max_len_factor));
  m.set("max_len_slack", std::to_string(config.max_len_slack));
  m.add_input(a.src_file);
  m.add_input(a.model);
  m.write_beside(a.out);
  std::cout << "wrote " << ptls.size() << " PTLs to " << a.out << "\n";
  return kExitOk;
}

// --- augment ------------------------------------------------------------------

struct AugmentArgs {
  std::string src_file;
  std::string tgt_file;
  std::string mode = "proportional";
  std::string mix = "stochastic";
  std::uint64_t seed = 0;
  double p = 0.5;
  std::string align;
  std::optional<std::size_t> force_ls;
  std::string out_src;
  std::string out_tgt;
};

int run_augment(const AugmentArgs& a) {
  AugmentConfig config;
  config.mode = parse_prefix_mode(a.mode);
  config.mix = parse_mix_mode(a.mix);
  config.seed = a.seed;
  config.truncate_prob = a.p;
  config.forced_source_len = a.force_ls;
  config.validate();

  const auto src = io::read_token_lines(a.src_file);
  const auto tgt = io::read_token_lines(a.tgt_file);
  if (src.size() != tgt.size()) {
    throw ValidationError(a.src_file + " has " + std::to_string(src.size()) + " lines but " +
                          a.tgt_file + " has " + std::to_string(tgt.size()));
  }
  std::vector<SentencePair> corpus;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].empty() || tgt[i].empty()) throw ParseError(a.src_file, i + 1, "empty side of sentence pair");
    corpus.push_back({src[i], tgt[i]});
  }
  std::vector<AlignmentSet> alignments;
  if (config.mode == PrefixMode::kAligned) {
    if (a.align.empty()) throw ValidationError("--mode aligned requires --align");
    alignments = io::read_alignments(a.align);
    if (alignments.size() != corpus.size()) {
      throw ValidationError(a.align + " has " + std::to_string(alignments.size()) +
                            " lines but the corpus has " + std::to_string(corpus.size()));
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      try {
        alignments[i].check_bounds(corpus[i].source.size(), corpus[i].target.size());
      } catch (const ValidationError& e) {
        throw ParseError(a.align, i + 1, e.what());
      }
    }
  }
  const auto out = augment_corpus(corpus, config, alignments.empty() ? nullptr : &alignments);
  std::vector<TokenSeq> out_src, out_tgt;
  for (const auto& pair : out) {
    out_src.push_back(pair.source);
    out_tgt.push_back(pair.target);
  }
  io::write_file(a.out_src, io::format_token_lines(out_src));
  io::write_file(a.out_tgt, io::format_token_lines(out_tgt));

  RunManifest m;
  m.command = "augment";
  m.set_string("mode", a.mode);
  m.set_string("mix", a.mix);
  m.set("seed", std::to_string(a.seed));
  m.set("p", io::fixed6(a.p));
  m.set("force_ls", a.force_ls ? std::to_string(*a.force_ls) : "null");
  m.add_input(a.src_file);
  m.add_input(a.tgt_file);
  if (!a.align.empty()) m.add_input(a.align);
  m.write_beside(a.out_src);
  std::cout << "wrote " << out.size() << " pairs\n";
  return kExitOk;
}

// --- sweep / frontier -----------------------------------------------------------

struct SweepArgs {
  std::string model;
  std::string dev_src, dev_ref, test_src, test_ref;
  std::string grid = "default";
  std::size_t beam = 1;
  std::size_t threads = 1;
  std::string out;
};

struct FrontierArgs {
  SweepArgs sweep;
  std::string sweep_csv;
  std::string ne_threshold = "0.2";
  std::string out;
};

RunManifest sweep_manifest(const std::string& command, const SweepArgs& a, const ScoringModel& model) {
  RunManifest m;
  m.command = command;
  m.set_string("grid", a.grid);
  m.set("beam", std::to_string(a.beam));
  m.set_string("model", model.describe());
  m.set("seed", model_seed_literal(model));
  for (const auto* f : {&a.model, &a.dev_src, &a.dev_ref, &a.test_src, &a.test_ref}) m.add_input(*f);
  return m;
}

std::vector<SweepPoint> run_sweep_points(const SweepArgs& a, std::unique_ptr<ScoringModel>& model) {
  for (const auto* f : {&a.model, &a.dev_src, &a.dev_ref, &a.test_src, &a.test_ref}) {
    if (f->empty()) {
      throw ValidationError("sweep needs --model, --dev-src, --dev-ref, --test-src and --test-ref");
    }
  }
  const auto grid = parse_grid(a.grid, a.beam);
  model = io::load_model(a.model);
  const Corpus dev = load_corpus(a.dev_src, a.dev_ref);
  const Corpus test = load_corpus(a.test_src, a.test_ref);
  SweepOptions options;
  // External scorers hold one process; keep them on a single worker.
  options.threads = dynamic_cast<const ExternalScorerModel*>(model.get()) ? 1 : a.threads;
  return sweep(*model, dev, test, grid, options);
}

int run_sweep(const SweepArgs& a) {
  std::unique_ptr<ScoringModel> model;
  const auto points = run_sweep_points(a, model);
  io::write_file(a.out, io::format_sweep_csv(points));
  sweep_manifest("sweep", a, *model).write_beside(a.out);
  std::cout << "wrote " << points.size() / 2 << " configs per split to " << a.out << "\n";
  return kExitOk;
}

int run_frontier(const FrontierArgs& a) {
  std::vector<SweepPoint> points;
  std::optional<RunManifest> manifest;
  if (!a.sweep_csv.empty()) {
    points = io::parse_sweep_csv(io::read_file(a.sweep_csv), a.sweep_csv);
    manifest.emplace();
    manifest->command = "frontier";
    manifest->add_input(a.sweep_csv);
  } else {
    std::unique_ptr<ScoringModel> model;
    points = run_sweep_points(a.sweep, model);
    manifest = sweep_manifest("frontier", a.sweep, *model);
    if (!a.sweep.out.empty()) io::write_file(a.sweep.out, io::format_sweep_csv(points));
  }
  if (points.empty()) throw ValidationError("no sweep points");

  io::FrontierSummary summary;
  summary.ne_threshold = parse_threshold(a.ne_threshold);
  summary.ne_stability =
      ne_stability(select_split(points, Split::kDev), select_split(points, Split::kTest));
  summary.low_revision = low_revision_curve(points, summary.ne_threshold);
  summary.no_revision = no_revision_curve(points);

  const std::string text = io::format_frontier(summary);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    io::write_file(a.out, text);
    manifest->set_string("ne_threshold", a.ne_threshold);
    manifest->write_beside(a.out);
  }
  std::cout << "ne_stability " << io::fixed6(summary.ne_stability) << "\n"
            << "low_revision_points " << summary.low_revision.size() << "\n"
            << "no_revision_points " << summary.no_revision.size() << "\n";
  return kExitOk;
}

// --- validate / serve -----------------------------------------------------------

int run_validate(const std::string& ptl_file) {
  const auto ptls = io::read_ptls(ptl_file);  // parse errors carry line numbers
  std::size_t append_only = 0;
  for (const auto& p : ptls) {
    const auto report = validate_ptl(p);
    append_only += report.append_only ? 1 : 0;
    std::cout << p.id << "\t" << (report.valid ? "valid" : "invalid") << "\t"
              << (report.append_only ? "append-only" : "revising") << "\n";
  }
  std::cout << "ptls " << ptls.size() << " append_only " << append_only << "\n";
  return kExitOk;
}

int run_serve(const std::string& model_file) {
  const auto model = io::load_model(model_file);
  std::ios::sync_with_stdio(false);
  serve_model(*model, std::cin, std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retrans: simultaneous translation policy simulation and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RETRANS_VERSION));

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "BLEU, DAL and NE of a PTL file");
  evaluate->add_option("ptl_file", ev.ptl_file, "PTL JSONL")->required();
  evaluate->add_option("ref_file", ev.ref_file, "references, one per line")->required();
  evaluate->add_option("--subword-marker", ev.marker, "suffix continuation marker")->capture_default_str();
  evaluate->add_option("--report", ev.report, "write the JSON report here");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "build PTLs with a decoding policy");
  simulate->add_option("src_file", sim.src_file, "source sentences")->required();
  simulate->add_option("--model", sim.model, "model config JSON")->required();
  simulate->add_option("--policy", sim.policy, "retranslate | stream")->capture_default_str();
  simulate->add_option("--beta", sim.beta, "bias weight")->capture_default_str();
  simulate->add_option("--k", sim.k, "wait-k")->capture_default_str();
  simulate->add_option("--beam", sim.beam, "beam size")->capture_default_str();
  simulate->add_option("--out", sim.out, "output PTL JSONL")->required();
  simulate->add_option("--threads", sim.threads, "worker threads")->capture_default_str();

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "add prefix pairs to a parallel corpus");
  augment->add_option("src_file", aug.src_file)->required();
  augment->add_option("tgt_file", aug.tgt_file)->required();
  augment->add_option("--mode", aug.mode, "proportional | aligned")->capture_default_str();
  augment->add_option("--mix", aug.mix, "stochastic | duplicate")->capture_default_str();
  augment->add_option("--seed", aug.seed)->capture_default_str();
  augment->add_option("--p", aug.p, "truncation probability (stochastic)")->capture_default_str();
  augment->add_option("--align", aug.align, "Pharaoh alignments");
  augment->add_option("--force-ls", aug.force_ls, "fixed source prefix length");
  augment->add_option("--out-src", aug.out_src)->required();
  augment->add_option("--out-tgt", aug.out_tgt)->required();

  const auto add_sweep_options = [](CLI::App* cmd, SweepArgs& s) {
    cmd->add_option("--model", s.model, "model config JSON");
    cmd->add_option("--dev-src", s.dev_src);
    cmd->add_option("--dev-ref", s.dev_ref);
    cmd->add_option("--test-src", s.test_src);
    cmd->add_option("--test-ref", s.test_ref);
    cmd->add_option("--grid", s.grid, "e.g. beta=0,0.5,1;k=1,4;beam=1")->capture_default_str();
    cmd->add_option("--beam", s.beam, "beam when the grid omits it")->capture_default_str();
    cmd->add_option("--threads", s.threads)->capture_default_str();
  };

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a (beta, k, beam) grid on dev and test");
  add_sweep_options(sweep_cmd, sw);
  sweep_cmd->add_option("--out", sw.out, "sweep CSV")->required();

  FrontierArgs fr;
  auto* frontier = app.add_subcommand("frontier", "Pareto frontier on dev projected to test");
  add_sweep_options(frontier, fr.sweep);
  frontier->add_option("--sweep", fr.sweep_csv, "read points from a sweep CSV instead");
  frontier->add_option("--sweep-out", fr.sweep.out, "also write the sweep CSV");
  frontier->add_option("--ne-threshold", fr.ne_threshold, "dev NE < threshold; 'inf' disables")->capture_default_str();
  frontier->add_option("--out", fr.out, "frontier JSON");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "check PTL structure");
  validate->add_option("ptl_file", validate_file)->required();

  std::string serve_model_file;
  auto* serve = app.add_subcommand("serve", "answer scorer requests on stdin with a model");
  serve->add_option("--model", serve_model_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (evaluate->parsed()) return run_evaluate(ev);
    if (simulate->parsed()) return run_simulate(sim);
    if (augment->parsed()) return run_augment(aug);
    if (sweep_cmd->parsed()) return run_sweep(sw);
    if (frontier->parsed()) return run_frontier(fr);
    if (validate->parsed()) return run_validate(validate_file);
    if (serve->parsed()) return run_serve(serve_model_file);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
