#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tileheur/heuristics.hpp"
#include "tileheur/rng.hpp"

namespace tileheur {

// A 2D square lattice whose occupied sites carry low-level heuristics.
// `rho` records the generation parameter (or the realised fraction for
// clusters extracted from a tile simulation), not a recomputed value.
struct Cluster {
  int width = 0;
  int height = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::int16_t> sites;  // row-major; -1 empty, else heuristic index

  bool occupied(int row, int col) const { return sites[row * width + col] >= 0; }
  Heuristic at(int row, int col) const {
    return static_cast<Heuristic>(sites[row * width + col]);
  }
  int occupied_count() const;
};

// Fills each site independently with probability rho; the occupant is drawn
// uniformly from the palette.
Cluster generate_cluster(int width, int height, double rho,
                         const std::vector<Heuristic>& palette, Rng& rng,
                         std::uint64_t seed = 0);

struct OccupiedSite {
  int row = 0;
  int col = 0;
  Heuristic kind = Heuristic::kTwoOpt;
};

// All occupied sites in row-major order.
std::vector<OccupiedSite> occupied_sites(const Cluster& cluster);

// Text format: header "rho=<r> seed=<s>", then one row per line with '.'
// for empty sites and the heuristic letter for occupied ones.
void write_cluster(std::ostream& out, const Cluster& cluster);
Cluster read_cluster(std::istream& in);
void save_cluster(const std::string& path, const Cluster& cluster);
Cluster load_cluster(const std::string& path);

}  // namespace tileheur
