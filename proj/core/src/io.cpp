#include "retrans/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <type_traits>

#include <json.hpp>

#include "retrans/error.hpp"
#include "retrans/scorer_client.hpp"

namespace retrans::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

TokenSeq tokens_from_json(const json& value, std::string_view source_name, std::size_t line_no,
                          std::string_view field) {
  if (!value.is_array()) {
    throw ParseError(std::string(source_name), line_no, "\"" + std::string(field) + "\" must be an array");
  }
  std::vector<std::string> tokens;
  tokens.reserve(value.size());
  for (const auto& t : value) {
    if (!t.is_string()) {
      throw ParseError(std::string(source_name), line_no,
                       "\"" + std::string(field) + "\" must contain only strings");
    }
    tokens.push_back(t.get<std::string>());
    if (!is_valid_token(tokens.back())) {
      throw ParseError(std::string(source_name), line_no,
                       "invalid token \"" + tokens.back() + "\" in \"" + std::string(field) + "\"");
    }
  }
  return TokenSeq(std::move(tokens));
}

std::string json_string(const std::string& s) { return json(s).dump(); }

std::size_t parse_index(std::string_view text, std::string_view source_name, std::size_t line_no) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(std::string(source_name), line_no, "bad alignment index \"" + std::string(text) + "\"");
  }
  return value;
}

std::string format_metrics(const SweepPoint& p) {
  return "{\"bleu\": " + fixed6(p.bleu) + ", \"dal\": " + fixed6(p.dal) + ", \"ne\": " + fixed6(p.ne) + "}";
}

std::string format_curve(const FrontierCurve& curve) {
  if (curve.empty()) return "[]";
  std::string out = "[\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const CurvePoint& c = curve[i];
    out += "    {\"beta\": " + fixed6(c.config.beta) + ", \"k\": " + std::to_string(c.config.k) +
           ", \"beam\": " + std::to_string(c.config.beam) + ", \"dev\": " + format_metrics(c.dev) +
           ", \"test\": " + format_metrics(c.test) + "}";
    out += i + 1 < curve.size() ? ",\n" : "\n";
  }
  return out + "  ]";
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing " + path.string());
}

std::string fixed6(double value) {
  if (value == 0.0) value = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

// --- PTL JSONL --------------------------------------------------------------

PrefixTranslationList parse_ptl_line(std::string_view line, std::string_view source_name,
                                     std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(strip_cr(line));
  } catch (const json::exception& e) {
    throw ParseError(std::string(source_name), line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(std::string(source_name), line_no, "expected a JSON object");
  for (const char* key : {"id", "source", "outputs"}) {
    if (!obj.contains(key)) {
      throw ParseError(std::string(source_name), line_no, std::string("missing \"") + key + "\"");
    }
  }
  if (!obj["id"].is_string()) throw ParseError(std::string(source_name), line_no, "\"id\" must be a string");

  PrefixTranslationList ptl;
  ptl.id = obj["id"].get<std::string>();
  ptl.source = tokens_from_json(obj["source"], source_name, line_no, "source");
  const json& outputs = obj["outputs"];
  if (!outputs.is_array()) throw ParseError(std::string(source_name), line_no, "\"outputs\" must be an array");
  for (const auto& o : outputs) ptl.outputs.push_back(tokens_from_json(o, source_name, line_no, "outputs"));

  const ValidationReport report = validate_ptl(ptl);
  if (!report.valid) throw ParseError(std::string(source_name), line_no, report.violations.front());
  return ptl;
}

std::string format_ptl_line(const PrefixTranslationList& ptl) {
  ordered_json obj;
  obj["id"] = ptl.id;
  obj["source"] = ptl.source.tokens();
  ordered_json outputs = ordered_json::array();
  for (const auto& o : ptl.outputs) outputs.push_back(o.tokens());
  obj["outputs"] = std::move(outputs);
  return obj.dump();
}

std::vector<PrefixTranslationList> read_ptls(std::istream& in, std::string_view source_name) {
  std::vector<PrefixTranslationList> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip_cr(line).find_first_not_of(" \t") == std::string_view::npos) continue;
    out.push_back(parse_ptl_line(line, source_name, line_no));
  }
  return out;
}

std::vector<PrefixTranslationList> read_ptls(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_ptls(in, path.string());
}

std::string format_ptls(const std::vector<PrefixTranslationList>& ptls) {
  std::string out;
  for (const auto& p : ptls) out += format_ptl_line(p) + "\n";
  return out;
}

// --- token lines ------------------------------------------------------------

std::vector<TokenSeq> read_token_lines(std::istream& in) {
  std::vector<TokenSeq> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(TokenSeq::parse(strip_cr(line)));
  return out;
}

std::vector<TokenSeq> read_token_lines(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return read_token_lines(in);
}

std::string format_token_lines(const std::vector<TokenSeq>& lines) {
  std::string out;
  for (const auto& l : lines) out += l.str() + "\n";
  return out;
}

// --- Pharaoh alignments -----------------------------------------------------

AlignmentSet parse_alignment_line(std::string_view line, std::string_view source_name,
                                  std::size_t line_no) {
  AlignmentSet set;
  for (const auto& item : TokenSeq::parse(strip_cr(line))) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      throw ParseError(std::string(source_name), line_no, "expected i-j, got \"" + item + "\"");
    }
    const std::string_view view(item);
    set.links.emplace_back(parse_index(view.substr(0, dash), source_name, line_no),
                           parse_index(view.substr(dash + 1), source_name, line_no));
  }
  return set;
}

std::string format_alignment_line(const AlignmentSet& alignments) {
  std::string out;
  for (std::size_t n = 0; n < alignments.links.size(); ++n) {
    if (n > 0) out += ' ';
    out += std::to_string(alignments.links[n].first) + "-" + std::to_string(alignments.links[n].second);
  }
  return out;
}

std::vector<AlignmentSet> read_alignments(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<AlignmentSet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) out.push_back(parse_alignment_line(line, path.string(), ++line_no));
  return out;
}

// --- reports ----------------------------------------------------------------

std::string format_report(const EvalReport& report) {
  std::string out = "{\n";
  out += "  \"bleu\": " + fixed6(report.bleu) + ",\n";
  out += "  \"dal\": " + fixed6(report.dal) + ",\n";
  out += "  \"ne\": " + fixed6(report.ne) + ",\n";
  out += std::string("  \"dal_aggregation\": \"") + EvalReport::kDalAggregation + "\",\n";
  out += std::string("  \"ne_aggregation\": \"") + EvalReport::kNeAggregation + "\",\n";
  out += "  \"sentences\": [";
  for (std::size_t i = 0; i < report.sentences.size(); ++i) {
    const SentenceMetrics& s = report.sentences[i];
    out += i == 0 ? "\n" : ",\n";
    out += "    {\"id\": " + json_string(s.id) + ", \"dal\": " + fixed6(s.dal) +
           ", \"ne\": " + fixed6(s.ne) + ", \"erased\": " + std::to_string(s.erased) +
           ", \"J\": " + std::to_string(s.final_len) + "}";
  }
  out += report.sentences.empty() ? "]\n" : "\n  ]\n";
  return out + "}\n";
}

std::string format_sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out(kSweepHeader);
  out += "\n";
  for (const auto& p : points) {
    out += fixed6(p.config.beta) + "," + std::to_string(p.config.k) + "," +
           std::to_string(p.config.beam) + "," + std::string(to_string(p.split)) + "," +
           fixed6(p.bleu) + "," + fixed6(p.dal) + "," + fixed6(p.ne) + "\n";
  }
  return out;
}

std::vector<SweepPoint> parse_sweep_csv(std::string_view text, std::string_view source_name) {
  const std::string name(source_name);
  std::vector<SweepPoint> points;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = strip_cr(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (!header_seen) {
      if (line != kSweepHeader) throw ParseError(name, line_no, "expected header \"" + std::string(kSweepHeader) + "\"");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t f = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(f, i - f));
        f = i + 1;
      }
    }
    if (fields.size() != 7) throw ParseError(name, line_no, "expected 7 fields");
    const auto num = [&]<typename T>(std::string_view s, T& value) {
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(name, line_no, "bad number \"" + std::string(s) + "\"");
      }
      if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ParseError(name, line_no, "non-finite value");
      }
    };
    SweepPoint p;
    num(fields[0], p.config.beta);
    num(fields[1], p.config.k);
    num(fields[2], p.config.beam);
    try {
      p.split = parse_split(fields[3]);
    } catch (const ValidationError& e) {
      throw ParseError(name, line_no, e.what());
    }
    num(fields[4], p.bleu);
    num(fields[5], p.dal);
    num(fields[6], p.ne);
    points.push_back(p);
  }
  if (!header_seen) throw ParseError(name, 1, "empty sweep file");
  return points;
}

std::string format_frontier(const FrontierSummary& summary) {
  std::string out = "{\n";
  out += "  \"ne_threshold\": " +
         (std::isfinite(summary.ne_threshold) ? fixed6(summary.ne_threshold) : std::string("null")) +
         ",\n";
  out += "  \"ne_stability\": " + fixed6(summary.ne_stability) + ",\n";
  out += "  \"low_revision\": " + format_curve(summary.low_revision) + ",\n";
  out += "  \"no_revision\": " + format_curve(summary.no_revision) + "\n";
  return out + "}\n";
}

// --- model configs ----------------------------------------------------------

std::unique_ptr<ScoringModel> parse_model_config(std::string_view json_text,
                                                 std::string_view source_name) {
  const std::string name(source_name);
  json cfg;
  try {
    cfg = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(name, 0, std::string("malformed model config: ") + e.what());
  }
  if (!cfg.is_object()) throw ParseError(name, 0, "model config must be a JSON object");

  try {
    if (cfg.contains("tables")) {
      LexicalTableModel::Table tables;
      for (const auto& [src, row] : cfg.at("tables").items()) {
        if (!row.is_object()) throw ParseError(name, 0, "table \"" + src + "\" must be an object");
        for (const auto& [tgt, p] : row.items()) {
          if (!p.is_number()) throw ParseError(name, 0, "table \"" + src + "\": non-numeric probability");
          tables[src][tgt] = p.get<double>();
        }
      }
      const bool eos_when_covered = cfg.value("eos_when_covered", true);
      return std::make_unique<LexicalTableModel>(std::move(tables), eos_when_covered);
    }
    if (cfg.contains("seed")) {
      if (!cfg.at("seed").is_number_integer()) throw ParseError(name, 0, "\"seed\" must be an integer");
      if (!cfg.contains("vocab") || !cfg.at("vocab").is_array()) {
        throw ParseError(name, 0, "seeded model needs a \"vocab\" array");
      }
      return std::make_unique<SeededRandomModel>(cfg.at("seed").get<std::uint64_t>(),
                                                 cfg.at("vocab").get<std::vector<std::string>>());
    }
    if (cfg.contains("command")) {
      ScorerOptions options;
      options.timeout = std::chrono::milliseconds(cfg.value("timeout_ms", std::int64_t{30000}));
      options.top = cfg.value("top", std::size_t{0});
      return std::make_unique<ExternalScorerModel>(cfg.at("command").get<std::string>(), options);
    }
  } catch (const json::exception& e) {
    throw ParseError(name, 0, std::string("invalid model config: ") + e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(name, 0, e.what());
  }
  throw ParseError(name, 0, "model config needs one of \"tables\", \"seed\" or \"command\"");
}

std::unique_ptr<ScoringModel> load_model(const std::filesystem::path& path) {
  return parse_model_config(read_file(path), path.string());
}

}  // namespace retrans::io
