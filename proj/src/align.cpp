#include "tileheur/align.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

namespace tileheur {

int column_pair_score(char x, char y) {
  const bool gx = x == '-', gy = y == '-';
  if (gx && gy) return 0;
  if (gx || gy) return -1;
  return x == y ? 1 : 0;
}

PairwiseAlignment align_pair(const std::string& a, const std::string& b) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  std::vector<int> h((m + 1) * (n + 1));
  auto H = [&h, n](int i, int j) -> int& { return h[i * (n + 1) + j]; };
  for (int j = 0; j <= n; ++j) H(0, j) = -j;
  for (int i = 1; i <= m; ++i) {
    H(i, 0) = -i;
    for (int j = 1; j <= n; ++j) {
      const int match = a[i - 1] == b[j - 1] ? 1 : 0;
      H(i, j) = std::max({H(i - 1, j - 1) + match, H(i - 1, j) - 1, H(i, j - 1) - 1});
    }
  }
  PairwiseAlignment out;
  out.score = H(m, n);
  int i = m, j = n;
  std::string ra, rb;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        H(i, j) == H(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 1 : 0)) {
      ra.push_back(a[i - 1]);
      rb.push_back(b[j - 1]);
      --i;
      --j;
    } else if (i > 0 && H(i, j) == H(i - 1, j) - 1) {
      ra.push_back(a[i - 1]);
      rb.push_back('-');
      --i;
    } else {
      ra.push_back('-');
      rb.push_back(b[j - 1]);
      --j;
    }
  }
  std::reverse(ra.begin(), ra.end());
  std::reverse(rb.begin(), rb.end());
  out.a = std::move(ra);
  out.b = std::move(rb);
  return out;
}

namespace {

// Merges the pairwise alignment (center -> ac, newcomer -> anew) into the
// running multi-alignment. rows[center_idx] de-gaps to the center sequence,
// and ac de-gaps to it as well; gap columns from either side are interleaved,
// master columns first.
void merge_into(std::vector<std::string>& rows, int center_idx,
                const std::string& ac, const std::string& anew,
                std::string& new_row) {
  const std::string master = rows[center_idx];
  const int cols = static_cast<int>(master.size());
  const int pcols = static_cast<int>(ac.size());
  std::vector<std::string> merged(rows.size());
  new_row.clear();
  int i = 0, k = 0;
  while (i < cols || k < pcols) {
    const bool master_gap = i < cols && master[i] == '-';
    const bool pair_gap = k < pcols && ac[k] == '-';
    if (i < cols && master_gap) {
      for (std::size_t r = 0; r < rows.size(); ++r) merged[r].push_back(rows[r][i]);
      new_row.push_back('-');
      ++i;
    } else if (k < pcols && pair_gap) {
      for (auto& row : merged) row.push_back('-');
      new_row.push_back(anew[k]);
      ++k;
    } else if (i < cols && k < pcols) {
      for (std::size_t r = 0; r < rows.size(); ++r) merged[r].push_back(rows[r][i]);
      new_row.push_back(anew[k]);
      ++i;
      ++k;
    } else if (i < cols) {
      // master letters remain but the pairwise alignment is exhausted;
      // cannot happen for de-gap-consistent inputs
      throw std::runtime_error("alignment merge out of sync");
    } else {
      throw std::runtime_error("alignment merge out of sync");
    }
  }
  rows = std::move(merged);
}

}  // namespace

Alignment align(const std::vector<std::string>& encodings,
                std::vector<std::string> row_ids) {
  const int k = static_cast<int>(encodings.size());
  if (k < 2) throw std::runtime_error("alignment needs at least 2 encodings");
  for (const auto& e : encodings) {
    if (e.empty()) throw std::runtime_error("cannot align an empty encoding");
    for (char ch : e) kind_of(ch);  // validates the alphabet
  }
  if (row_ids.empty()) {
    for (int i = 0; i < k; ++i) row_ids.push_back("ET" + std::to_string(i + 1));
  }
  if (static_cast<int>(row_ids.size()) != k)
    throw std::runtime_error("row id count does not match encoding count");

  // Pairwise scores; center maximises the row sum (ties: lowest index).
  std::vector<std::vector<int>> score(k, std::vector<int>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      score[i][j] = score[j][i] = align_pair(encodings[i], encodings[j]).score;
  int center = 0;
  long long best_total = std::numeric_limits<long long>::min();
  for (int i = 0; i < k; ++i) {
    long long total = 0;
    for (int j = 0; j < k; ++j) total += score[i][j];
    if (total > best_total) {
      best_total = total;
      center = i;
    }
  }

  Alignment result;
  result.row_ids = std::move(row_ids);
  std::vector<std::string> rows{encodings[center]};
  std::vector<int> row_source{center};  // input index of each built row
  for (int j = 0; j < k; ++j) {
    if (j == center) continue;
    const auto pairwise = align_pair(encodings[center], encodings[j]);
    std::string new_row;
    merge_into(rows, 0, pairwise.a, pairwise.b, new_row);
    rows.push_back(std::move(new_row));
    row_source.push_back(j);
  }
  // Restore input order.
  result.rows.resize(k);
  for (int r = 0; r < k; ++r) result.rows[row_source[r]] = std::move(rows[r]);
  return result;
}

long long sum_of_pairs_score(const Alignment& alignment) {
  long long total = 0;
  const std::size_t k = alignment.rows.size();
  for (std::size_t col = 0; col < alignment.columns(); ++col)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        total += column_pair_score(alignment.rows[i][col], alignment.rows[j][col]);
  return total;
}

PatternThread extract_pattern(const Alignment& alignment) {
  PatternThread pattern;
  const int k = static_cast<int>(alignment.rows.size());
  std::vector<bool> contributed(k, false);
  for (std::size_t col = 0; col < alignment.columns(); ++col) {
    std::array<int, 256> count{};
    std::array<int, 256> first_row;
    first_row.fill(-1);
    for (int r = 0; r < k; ++r) {
      const unsigned char ch = alignment.rows[r][col];
      if (ch == '-') continue;
      if (first_row[ch] < 0) first_row[ch] = r;
      ++count[ch];
    }
    int best_letter = -1;
    for (int ch = 0; ch < 256; ++ch) {
      if (count[ch] < 2) continue;
      if (best_letter < 0 || count[ch] > count[best_letter] ||
          (count[ch] == count[best_letter] && first_row[ch] < first_row[best_letter]))
        best_letter = ch;
    }
    if (best_letter < 0) continue;
    pattern.match_columns.push_back(static_cast<int>(col));
    pattern.thread.sequence.push_back(kind_of(static_cast<char>(best_letter)));
    for (int r = 0; r < k; ++r)
      if (alignment.rows[r][col] == static_cast<char>(best_letter)) contributed[r] = true;
  }
  for (int r = 0; r < k; ++r)
    if (contributed[r]) pattern.sources.push_back(r);
  return pattern;
}

}  // namespace tileheur
