#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "retrans/augment.hpp"
#include "retrans/frontier.hpp"
#include "retrans/metrics.hpp"
#include "retrans/model.hpp"
#include "retrans/ptl.hpp"
#include "retrans/tokens.hpp"

namespace retrans::io {

// Every reader takes a `source_name` used in ParseError messages. Files are
// UTF-8 with LF line endings; a trailing CR is tolerated on input.

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Fixed-point with six decimals, the format of every numeric report field.
std::string fixed6(double value);

// PTL JSONL: {"id": string, "source": [tokens], "outputs": [[tokens], ...]}
PrefixTranslationList parse_ptl_line(std::string_view line, std::string_view source_name = "<ptl>",
                                     std::size_t line_no = 0);
std::string format_ptl_line(const PrefixTranslationList& ptl);
std::vector<PrefixTranslationList> read_ptls(std::istream& in, std::string_view source_name);
std::vector<PrefixTranslationList> read_ptls(const std::filesystem::path& path);
std::string format_ptls(const std::vector<PrefixTranslationList>& ptls);

// Whitespace-tokenized text, one sentence per line. Blank lines are empty
// sequences.
std::vector<TokenSeq> read_token_lines(std::istream& in);
std::vector<TokenSeq> read_token_lines(const std::filesystem::path& path);
std::string format_token_lines(const std::vector<TokenSeq>& lines);

// Pharaoh alignments: "i-j" pairs, 0-based, one sentence per line.
AlignmentSet parse_alignment_line(std::string_view line, std::string_view source_name = "<align>",
                                  std::size_t line_no = 0);
std::string format_alignment_line(const AlignmentSet& alignments);
std::vector<AlignmentSet> read_alignments(const std::filesystem::path& path);

// Evaluation report JSON.
std::string format_report(const EvalReport& report);

// Sweep CSV with header "beta,k,beam,split,bleu,dal,ne".
inline constexpr std::string_view kSweepHeader = "beta,k,beam,split,bleu,dal,ne";
std::string format_sweep_csv(const std::vector<SweepPoint>& points);
std::vector<SweepPoint> parse_sweep_csv(std::string_view text, std::string_view source_name = "<csv>");

struct FrontierSummary {
  double ne_threshold = 0.2;
  double ne_stability = 0.0;
  FrontierCurve low_revision;
  FrontierCurve no_revision;
};
std::string format_frontier(const FrontierSummary& summary);

// Model configs:
//   {"tables": {"src": {"tgt": prob}}, "eos_when_covered": true}
//   {"seed": int, "vocab": [tokens]}
//   {"command": "...", "timeout_ms": 30000, "top": 64}   (external scorer)
std::unique_ptr<ScoringModel> parse_model_config(std::string_view json_text,
                                                 std::string_view source_name = "<model>");
std::unique_ptr<ScoringModel> load_model(const std::filesystem::path& path);

}  // namespace retrans::io
