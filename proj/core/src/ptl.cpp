#include "retrans/ptl.hpp"

#include "retrans/error.hpp"

namespace retrans {

bool is_append_only(const PrefixTranslationList& ptl) noexcept {
  for (std::size_t i = 1; i < ptl.outputs.size(); ++i) {
    if (!ptl.outputs[i].starts_with(ptl.outputs[i - 1])) return false;
  }
  return true;
}

ValidationReport validate_ptl(const PrefixTranslationList& ptl) {
  ValidationReport report;
  const auto fail = [&](std::string msg) {
    report.valid = false;
    report.violations.push_back(std::move(msg));
  };
  if (ptl.source.empty()) fail("empty source");
  if (ptl.outputs.size() != ptl.source.size()) {
    fail("length mismatch: " + std::to_string(ptl.source.size()) + " source tokens but " +
         std::to_string(ptl.outputs.size()) + " outputs");
  }
  report.append_only = is_append_only(ptl);
  return report;
}

void require_valid(const PrefixTranslationList& ptl) {
  auto report = validate_ptl(ptl);
  if (!report.valid) {
    throw ValidationError("invalid PTL \"" + ptl.id + "\": " + report.violations.front());
  }
}

PrefixTranslationList merge_ptl(const PrefixTranslationList& ptl, std::string_view marker,
                                const WarningSink& warn) {
  PrefixTranslationList out;
  out.id = ptl.id;
  out.source = merge_subwords(ptl.source, marker, warn);

  // One display per merged source word: the one shown after its last piece.
  std::vector<std::size_t> steps;
  if (ptl.outputs.size() == ptl.source.size()) {
    const auto continues = [&](const std::string& t) {
      return t.size() >= marker.size() && t.compare(t.size() - marker.size(), marker.size(),
                                                    marker) == 0;
    };
    for (std::size_t i = 0; i < ptl.source.size(); ++i) {
      if (!continues(ptl.source[i])) steps.push_back(i);
    }
    const std::size_t last = ptl.source.size() - 1;
    if (!ptl.source.empty() && continues(ptl.source[last])) {
      if (steps.size() < out.source.size()) {
        steps.push_back(last);
      } else if (!steps.empty()) {
        steps.back() = last;
      }
    }
  } else {
    for (std::size_t i = 0; i < ptl.outputs.size(); ++i) steps.push_back(i);
  }
  out.outputs.reserve(steps.size());
  for (std::size_t i : steps) out.outputs.push_back(merge_subwords(ptl.outputs[i], marker, warn));
  return out;
}

}  // namespace retrans
