#pragma once

#include <string>
#include <vector>

#include "tileheur/threads.hpp"

namespace tileheur {

// Scoring used throughout: match +1, mismatch 0, gap -1, gap-gap 0.
int column_pair_score(char x, char y);

struct PairwiseAlignment {
  std::string a;
  std::string b;
  int score = 0;
};

// Optimal global alignment (Needleman-Wunsch, linear gaps). Traceback
// prefers diagonal, then a gap in b, then a gap in a.
PairwiseAlignment align_pair(const std::string& a, const std::string& b);

struct Alignment {
  std::vector<std::string> rows;  // equal length; '-' marks gaps
  std::vector<std::string> row_ids;

  std::size_t columns() const { return rows.empty() ? 0 : rows[0].size(); }
};

// Center-star multiple alignment: the center is the sequence maximising the
// summed pairwise alignment scores; the others are merged into it under
// "once a gap, always a gap". Rows keep the input order. Requires at least
// two non-empty encodings over the heuristic alphabet.
Alignment align(const std::vector<std::string>& encodings,
                std::vector<std::string> row_ids = {});

long long sum_of_pairs_score(const Alignment& alignment);

struct PatternThread {
  ExecutionThread thread;
  std::vector<int> match_columns;  // alignment columns that produced a letter
  std::vector<int> sources;        // rows contributing a consensus letter
};

// Left-to-right column scan: a column where some letter occurs in two or
// more rows emits its most frequent letter (ties resolved towards the
// letter of the lowest-index row holding one). No match columns yields an
// empty pattern.
PatternThread extract_pattern(const Alignment& alignment);

}  // namespace tileheur
