#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "tileheur/rng.hpp"
#include "tileheur/tsp.hpp"

namespace tileheur {

// The eight low-level tour-improvement heuristics. All operate hill-climber
// style: a call either strictly improves the tour or leaves it unchanged.
enum class Heuristic : std::uint8_t {
  kTwoOpt,             // best improving 2-edge exchange           (C)
  kThreeOpt,           // best improving 3-edge exchange           (D)
  kOrOpt,              // best segment-3, then -2, then -1 move    (E)
  kNodeInsertion,      // best single-city relocation              (F)
  kCityInsertion,      // random 2-city segment relocation, k = 1  (A)
  kTwoExchange,        // random 2-edge exchange, n = 2            (T)
  kArbitraryInsertion, // random segment, cheapest reinsertion     (G)
  kInverOver,          // random segment inversion                 (H)
};

constexpr int kHeuristicCount = 8;

constexpr std::array<Heuristic, kHeuristicCount> kAllHeuristics = {
    Heuristic::kTwoOpt,        Heuristic::kThreeOpt,
    Heuristic::kOrOpt,         Heuristic::kNodeInsertion,
    Heuristic::kCityInsertion, Heuristic::kTwoExchange,
    Heuristic::kArbitraryInsertion, Heuristic::kInverOver,
};

char letter_of(Heuristic kind);
Heuristic kind_of(char letter);  // throws on an unmapped letter
bool is_stochastic(Heuristic kind);
const char* name_of(Heuristic kind);

struct MoveOutcome {
  Tour tour;
  bool improved = false;
  std::int64_t delta = 0;  // new length - old length, <= 0
};

// Applies one heuristic. Deterministic kinds ignore the random source.
// Stochastic kinds sample up to n candidate moves and apply the first
// improving one; with no improving sample the call is a no-op.
MoveOutcome apply_heuristic(Heuristic kind, const TspInstance& instance,
                            const Tour& tour, Rng& rng);

}  // namespace tileheur
