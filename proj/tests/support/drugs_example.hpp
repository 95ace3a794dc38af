#pragma once

#include "retrans/ptl.hpp"

namespace retrans::test {

// The German example "Neue Arzneimittel könnten Lungen- und Eierstockkrebs
// verlangsamen" with one display per source word.
inline PrefixTranslationList drugs_ptl() {
  PrefixTranslationList p;
  p.id = "drugs";
  p.source = TokenSeq{"Neue", "Arzneimittel", "könnten", "Lungen-", "und", "Eierstockkrebs",
                      "verlangsamen"};
  p.outputs = {
      TokenSeq{"New"},
      TokenSeq{"New", "Medicines"},
      TokenSeq{"New", "Medicines"},
      TokenSeq{"New", "drugs", "may", "be", "lung"},
      TokenSeq{"New", "drugs", "could", "be", "lung", "and"},
      TokenSeq{"New", "drugs", "may", "be", "lung", "and", "ovarian", "cancer"},
      TokenSeq{"New", "drugs", "may", "slow", "lung", "and", "ovarian", "cancer"},
  };
  return p;
}

inline TokenSeq drugs_reference() {
  return TokenSeq{"New", "drugs", "may", "slow", "lung", ",", "ovarian", "cancer"};
}

}  // namespace retrans::test
