#include "tileheur/heuristics.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tileheur {

char letter_of(Heuristic kind) {
  switch (kind) {
    case Heuristic::kTwoOpt: return 'C';
    case Heuristic::kThreeOpt: return 'D';
    case Heuristic::kOrOpt: return 'E';
    case Heuristic::kNodeInsertion: return 'F';
    case Heuristic::kCityInsertion: return 'A';
    case Heuristic::kTwoExchange: return 'T';
    case Heuristic::kArbitraryInsertion: return 'G';
    case Heuristic::kInverOver: return 'H';
  }
  throw std::runtime_error("invalid heuristic kind");
}

Heuristic kind_of(char letter) {
  switch (letter) {
    case 'C': return Heuristic::kTwoOpt;
    case 'D': return Heuristic::kThreeOpt;
    case 'E': return Heuristic::kOrOpt;
    case 'F': return Heuristic::kNodeInsertion;
    case 'A': return Heuristic::kCityInsertion;
    case 'T': return Heuristic::kTwoExchange;
    case 'G': return Heuristic::kArbitraryInsertion;
    case 'H': return Heuristic::kInverOver;
    default:
      throw std::runtime_error(std::string("unknown heuristic letter '") + letter + "'");
  }
}

bool is_stochastic(Heuristic kind) {
  switch (kind) {
    case Heuristic::kCityInsertion:
    case Heuristic::kTwoExchange:
    case Heuristic::kArbitraryInsertion:
    case Heuristic::kInverOver:
      return true;
    default:
      return false;
  }
}

const char* name_of(Heuristic kind) {
  switch (kind) {
    case Heuristic::kTwoOpt: return "2-opt";
    case Heuristic::kThreeOpt: return "3-opt";
    case Heuristic::kOrOpt: return "or-opt";
    case Heuristic::kNodeInsertion: return "node-insertion";
    case Heuristic::kCityInsertion: return "1-city-insertion";
    case Heuristic::kTwoExchange: return "2-exchange";
    case Heuristic::kArbitraryInsertion: return "arbitrary-insertion";
    case Heuristic::kInverOver: return "inver-over";
  }
  return "?";
}

namespace {

// True when g lies in the cyclic window [start, start+len) mod n.
inline bool in_cyclic(int g, int start, int len, int n) {
  return ((g - start + n) % n) < len;
}

// Reverses tour positions i..j, walking cyclically when j < i.
void reverse_cyclic(std::vector<int>& t, int i, int j) {
  const int n = static_cast<int>(t.size());
  int len = ((j - i + n) % n) + 1;
  for (int s = 0; s < len / 2; ++s) {
    std::swap(t[(i + s) % n], t[(j - s + n) % n]);
  }
}

// delta of the 2-opt move removing edges (i,i+1) and (j,j+1), i < j.
inline std::int32_t two_opt_delta(const TspInstance& inst, const std::vector<int>& t,
                                  int i, int j) {
  const int n = static_cast<int>(t.size());
  const int a = t[i], b = t[i + 1];
  const int c = t[j], d = t[(j + 1) % n];
  return inst.distance(a, c) + inst.distance(b, d) - inst.distance(a, b) -
         inst.distance(c, d);
}

struct TwoOptMove {
  int i, j;
  std::int32_t delta;
};

std::optional<TwoOptMove> best_two_opt(const TspInstance& inst,
                                       const std::vector<int>& t) {
  const int n = static_cast<int>(t.size());
  TwoOptMove best{0, 0, 0};
  for (int i = 0; i + 1 < n; ++i) {
    const int a = t[i], b = t[i + 1];
    const std::int32_t* row_a = inst.dist_row(a);
    const std::int32_t* row_b = inst.dist_row(b);
    const std::int32_t dab = row_a[b];
    for (int j = i + 1; j < n; ++j) {
      const int c = t[j], d = t[(j + 1) % n];
      const std::int32_t delta = row_a[c] + row_b[d] - dab - inst.distance(c, d);
      if (delta < best.delta) best = {i, j, delta};
    }
  }
  if (best.delta >= 0) return std::nullopt;
  return best;
}

struct ThreeOptMove {
  int i, j, k;
  int variant;  // 1..7
  std::int32_t delta;
};

// The 7 reconnections of the cut edges (i,i+1), (j,j+1), (k,k+1), i<j<k,
// with segments S1 = t[i+1..j], S2 = t[j+1..k]:
//   1: rev(S1)            2: rev(S2)            3: rev(S1) rev(S2)
//   4: S2 S1              5: S2 rev(S1)         6: rev(S2) S1
//   7: rev(S2) rev(S1)
// 1, 2 and 7 embed the three pairwise 2-opt moves; 3..6 are proper 3-opt.
std::optional<ThreeOptMove> best_three_opt(const TspInstance& inst,
                                           const std::vector<int>& t) {
  const int n = static_cast<int>(t.size());
  const int first = t[0];
  ThreeOptMove best{0, 0, 0, 0, 0};
  for (int i = 0; i + 2 < n; ++i) {
    const int a = t[i], b = t[i + 1];
    const std::int32_t* row_a = inst.dist_row(a);
    const std::int32_t* row_b = inst.dist_row(b);
    const std::int32_t dab = row_a[b];
    for (int j = i + 1; j + 1 < n; ++j) {
      const int c = t[j], dd = t[j + 1];
      const std::int32_t* row_c = inst.dist_row(c);
      const std::int32_t* row_dd = inst.dist_row(dd);
      const std::int32_t dcd = row_c[dd];
      const std::int32_t dac = row_a[c];
      const std::int32_t dbd = row_b[dd];
      const std::int32_t dad = row_a[dd];
      const std::int32_t ddb = row_dd[b];
      const std::int32_t rem12 = dab + dcd;
      for (int k = j + 1; k < n; ++k) {
        const int e = t[k];
        const int f = (k + 1 < n) ? t[k + 1] : first;
        const std::int32_t* row_e = inst.dist_row(e);
        const std::int32_t def = row_e[f];
        const std::int32_t removed = rem12 + def;
        const std::int32_t dce = row_c[e];
        const std::int32_t dbe = row_b[e];
        const std::int32_t dae = row_a[e];
        const std::int32_t ddf = row_dd[f];
        const std::int32_t dbf = row_b[f];
        const std::int32_t dcf = row_c[f];
        const std::int32_t sums[7] = {
            static_cast<std::int32_t>(dac + dbd + def),  // 1
            static_cast<std::int32_t>(dab + dce + ddf),  // 2
            static_cast<std::int32_t>(dac + dbe + ddf),  // 3
            static_cast<std::int32_t>(dad + dbe + dcf),  // 4
            static_cast<std::int32_t>(dad + dce + dbf),  // 5
            static_cast<std::int32_t>(dae + ddb + dcf),  // 6
            static_cast<std::int32_t>(dae + dcd + dbf),  // 7
        };
        for (int v = 0; v < 7; ++v) {
          const std::int32_t delta = sums[v] - removed;
          if (delta < best.delta) best = {i, j, k, v + 1, delta};
        }
      }
    }
  }
  if (best.delta >= 0) return std::nullopt;
  return best;
}

std::vector<int> rebuild_three_opt(const std::vector<int>& t, const ThreeOptMove& m) {
  const int n = static_cast<int>(t.size());
  std::vector<int> out;
  out.reserve(n);
  out.insert(out.end(), t.begin(), t.begin() + m.i + 1);
  const auto s1_begin = t.begin() + m.i + 1, s1_end = t.begin() + m.j + 1;
  const auto s2_begin = t.begin() + m.j + 1, s2_end = t.begin() + m.k + 1;
  auto fwd = [&out](auto b, auto e) { out.insert(out.end(), b, e); };
  auto rev = [&out](auto b, auto e) {
    out.insert(out.end(), std::make_reverse_iterator(e), std::make_reverse_iterator(b));
  };
  switch (m.variant) {
    case 1: rev(s1_begin, s1_end); fwd(s2_begin, s2_end); break;
    case 2: fwd(s1_begin, s1_end); rev(s2_begin, s2_end); break;
    case 3: rev(s1_begin, s1_end); rev(s2_begin, s2_end); break;
    case 4: fwd(s2_begin, s2_end); fwd(s1_begin, s1_end); break;
    case 5: fwd(s2_begin, s2_end); rev(s1_begin, s1_end); break;
    case 6: rev(s2_begin, s2_end); fwd(s1_begin, s1_end); break;
    case 7: rev(s2_begin, s2_end); rev(s1_begin, s1_end); break;
    default: throw std::runtime_error("bad 3-opt variant");
  }
  out.insert(out.end(), t.begin() + m.k + 1, t.end());
  return out;
}

struct RelocationMove {
  int seg_start;  // tour position of the segment's first city
  int seg_len;
  int gap;  // original edge index (t[gap], t[gap+1]) receiving the segment
  std::int32_t delta;
};

// delta of relocating the cyclic segment starting at position p (length len)
// into the gap at edge index g. g must not be one of the len+1 destroyed edges.
inline std::int32_t relocation_delta(const TspInstance& inst, const std::vector<int>& t,
                                     int p, int len, int g, std::int32_t removal) {
  const int n = static_cast<int>(t.size());
  const int first = t[p], last = t[(p + len - 1) % n];
  const int u = t[g], v = t[(g + 1) % n];
  return removal + inst.distance(u, first) + inst.distance(last, v) -
         inst.distance(u, v);
}

inline std::int32_t removal_gain(const TspInstance& inst, const std::vector<int>& t,
                                 int p, int len) {
  const int n = static_cast<int>(t.size());
  const int prev = t[(p - 1 + n) % n], next = t[(p + len) % n];
  const int first = t[p], last = t[(p + len - 1) % n];
  return inst.distance(prev, next) - inst.distance(prev, first) -
         inst.distance(last, next);
}

std::optional<RelocationMove> best_relocation(const TspInstance& inst,
                                              const std::vector<int>& t, int len) {
  const int n = static_cast<int>(t.size());
  if (len > n - 2) return std::nullopt;
  RelocationMove best{0, len, 0, 0};
  for (int p = 0; p < n; ++p) {
    const std::int32_t removal = removal_gain(inst, t, p, len);
    for (int g = 0; g < n; ++g) {
      if (in_cyclic(g, (p - 1 + n) % n, len + 1, n)) continue;
      const std::int32_t delta = relocation_delta(inst, t, p, len, g, removal);
      if (delta < best.delta) best = {p, len, g, delta};
    }
  }
  if (best.delta >= 0) return std::nullopt;
  return best;
}

std::vector<int> apply_relocation(const std::vector<int>& t, const RelocationMove& m) {
  const int n = static_cast<int>(t.size());
  std::vector<int> seg(m.seg_len);
  for (int s = 0; s < m.seg_len; ++s) seg[s] = t[(m.seg_start + s) % n];
  std::vector<int> out;
  out.reserve(n);
  const int u = t[m.gap];
  for (int q = (m.seg_start + m.seg_len) % n, c = 0; c < n - m.seg_len;
       q = (q + 1) % n, ++c) {
    out.push_back(t[q]);
    if (t[q] == u) out.insert(out.end(), seg.begin(), seg.end());
  }
  return out;
}

MoveOutcome no_op(const Tour& tour) { return {tour, false, 0}; }

MoveOutcome two_opt(const TspInstance& inst, const Tour& tour) {
  auto move = best_two_opt(inst, tour.order);
  if (!move) return no_op(tour);
  Tour out = tour;
  std::reverse(out.order.begin() + move->i + 1, out.order.begin() + move->j + 1);
  return {std::move(out), true, move->delta};
}

MoveOutcome three_opt(const TspInstance& inst, const Tour& tour) {
  auto move = best_three_opt(inst, tour.order);
  if (!move) return no_op(tour);
  return {Tour{rebuild_three_opt(tour.order, *move)}, true, move->delta};
}

MoveOutcome node_insertion(const TspInstance& inst, const Tour& tour) {
  auto move = best_relocation(inst, tour.order, 1);
  if (!move) return no_op(tour);
  return {Tour{apply_relocation(tour.order, *move)}, true, move->delta};
}

// Segment phases of length 3, 2, 1, each applied at most once.
MoveOutcome or_opt(const TspInstance& inst, const Tour& tour) {
  Tour current = tour;
  std::int64_t total = 0;
  for (int len : {3, 2, 1}) {
    auto move = best_relocation(inst, current.order, len);
    if (!move) continue;
    current.order = apply_relocation(current.order, *move);
    total += move->delta;
  }
  if (total == 0) return no_op(tour);
  return {std::move(current), true, total};
}

// Stochastic kinds sample up to n moves and take the first improving one.

MoveOutcome city_insertion(const TspInstance& inst, const Tour& tour, Rng& rng) {
  const int n = tour.size();
  constexpr int kLen = 2;  // k = 1: the segment spans cities i..i+k
  if (kLen > n - 2) return no_op(tour);
  for (int attempt = 0; attempt < n; ++attempt) {
    const int p = rng.index(n);
    const int g = rng.index(n);
    if (in_cyclic(g, (p - 1 + n) % n, kLen + 1, n)) continue;
    const std::int32_t delta =
        relocation_delta(inst, tour.order, p, kLen, g,
                         removal_gain(inst, tour.order, p, kLen));
    if (delta < 0) {
      RelocationMove m{p, kLen, g, delta};
      return {Tour{apply_relocation(tour.order, m)}, true, delta};
    }
  }
  return no_op(tour);
}

MoveOutcome two_exchange(const TspInstance& inst, const Tour& tour, Rng& rng) {
  const int n = tour.size();
  for (int attempt = 0; attempt < n; ++attempt) {
    int i = rng.index(n);
    int j = rng.index(n);
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    const std::int32_t delta = two_opt_delta(inst, tour.order, i, j);
    if (delta < 0) {
      Tour out = tour;
      std::reverse(out.order.begin() + i + 1, out.order.begin() + j + 1);
      return {std::move(out), true, delta};
    }
  }
  return no_op(tour);
}

MoveOutcome arbitrary_insertion(const TspInstance& inst, const Tour& tour, Rng& rng) {
  const int n = tour.size();
  const std::vector<int>& t = tour.order;
  for (int attempt = 0; attempt < n; ++attempt) {
    const int i = rng.index(n);
    const int j = rng.index(n);
    const int len = (j - i + n) % n + 1;
    if (len > n - 2) continue;
    const int prev = t[(i - 1 + n) % n], next = t[(j + 1) % n];
    // the bridge prev-next replaces the whole path prev, t[i], ..., t[j], next
    std::int64_t delta = inst.distance(prev, next);
    int before = prev;
    for (int s = 0; s < len; ++s) {
      const int cur = t[(i + s) % n];
      delta -= inst.distance(before, cur);
      before = cur;
    }
    delta -= inst.distance(t[j], next);
    std::vector<int> rest;
    rest.reserve(n - len);
    for (int q = (j + 1) % n, c = 0; c < n - len; q = (q + 1) % n, ++c)
      rest.push_back(t[q]);
    // cheapest insertion of each removed city, in segment order
    for (int s = 0; s < len; ++s) {
      const int city = t[(i + s) % n];
      const int m = static_cast<int>(rest.size());
      int best_gap = 0;
      std::int32_t best_cost = 0;
      for (int q = 0; q < m; ++q) {
        const int u = rest[q], v = rest[(q + 1) % m];
        const std::int32_t cost = inst.distance(u, city) + inst.distance(city, v) -
                                  inst.distance(u, v);
        if (q == 0 || cost < best_cost) {
          best_cost = cost;
          best_gap = q;
        }
      }
      delta += best_cost;
      rest.insert(rest.begin() + best_gap + 1, city);
    }
    if (delta < 0) return {Tour{std::move(rest)}, true, delta};
  }
  return no_op(tour);
}

MoveOutcome inver_over(const TspInstance& inst, const Tour& tour, Rng& rng) {
  const int n = tour.size();
  const std::vector<int>& t = tour.order;
  for (int attempt = 0; attempt < n; ++attempt) {
    const int i = rng.index(n);
    const int j = rng.index(n);
    if (i == j) continue;
    if ((j + 1) % n == i) continue;  // segment would be the whole tour
    const int prev = t[(i - 1 + n) % n], next = t[(j + 1) % n];
    const std::int32_t delta = inst.distance(prev, t[j]) + inst.distance(t[i], next) -
                               inst.distance(prev, t[i]) - inst.distance(t[j], next);
    if (delta < 0) {
      Tour out = tour;
      reverse_cyclic(out.order, i, j);
      return {std::move(out), true, delta};
    }
  }
  return no_op(tour);
}

}  // namespace

MoveOutcome apply_heuristic(Heuristic kind, const TspInstance& instance,
                            const Tour& tour, Rng& rng) {
  if (tour.size() != instance.size())
    throw std::runtime_error("tour does not match instance size");
  switch (kind) {
    case Heuristic::kTwoOpt: return two_opt(instance, tour);
    case Heuristic::kThreeOpt: return three_opt(instance, tour);
    case Heuristic::kOrOpt: return or_opt(instance, tour);
    case Heuristic::kNodeInsertion: return node_insertion(instance, tour);
    case Heuristic::kCityInsertion: return city_insertion(instance, tour, rng);
    case Heuristic::kTwoExchange: return two_exchange(instance, tour, rng);
    case Heuristic::kArbitraryInsertion: return arbitrary_insertion(instance, tour, rng);
    case Heuristic::kInverOver: return inver_over(instance, tour, rng);
  }
  throw std::runtime_error("invalid heuristic kind");
}

}  // namespace tileheur
