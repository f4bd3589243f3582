#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tileheur/heuristics.hpp"
#include "tileheur/percolation.hpp"
#include "tileheur/rng.hpp"

namespace tileheur {

// Edge order: north, east, south, west.
struct WangTile {
  std::array<int, 4> edges = {0, 0, 0, 0};
  Heuristic payload = Heuristic::kTwoOpt;
};

// Symmetric colour-pair strength map; unlisted pairs have strength 0.
class GlueFunction {
 public:
  void set(int a, int b, double strength);
  double strength(int a, int b) const;

 private:
  std::map<std::pair<int, int>, double> table_;
};

// Kinetic simulation: mobile tiles random-walk on a bounded lattice; a
// mobile tile whose summed contact strength exceeds tau freezes together
// with everything it touches. Frozen tiles never move again.
class SimState {
 public:
  SimState(std::vector<WangTile> tiles, GlueFunction glue, int width, int height,
           double tau, Rng& rng);

  // One synchronous sweep: every mobile tile, in id order, attempts one
  // uniform move (blocked moves are cancelled); afterwards contact strengths
  // are evaluated once.
  void step(Rng& rng);
  void run(int steps, Rng& rng);

  int width() const { return width_; }
  int height() const { return height_; }
  double tau() const { return tau_; }
  int step_count() const { return step_count_; }
  int tile_count() const { return static_cast<int>(tiles_.size()); }
  int frozen_count() const;
  int mobile_count() const { return tile_count() - frozen_count(); }

  bool frozen(int id) const { return frozen_[id]; }
  std::pair<int, int> position(int id) const { return {rows_[id], cols_[id]}; }
  const WangTile& tile(int id) const { return tiles_[id]; }
  int tile_at(int row, int col) const { return lattice_[row * width_ + col]; }

 private:
  double contact_strength(int id) const;

  int width_ = 0;
  int height_ = 0;
  double tau_ = 0.0;
  int step_count_ = 0;
  std::vector<WangTile> tiles_;
  std::vector<int> rows_, cols_;
  std::vector<bool> frozen_;
  std::vector<int> lattice_;  // -1 or tile id
  GlueFunction glue_;
};

// Places the tiles uniformly on distinct cells, all mobile.
SimState init_sim(const std::vector<WangTile>& tiles, GlueFunction glue, int width,
                  int height, double tau, Rng& rng);

// A cluster whose occupied sites are exactly the frozen tiles' cells; rho is
// the realised occupied fraction.
Cluster extract_cluster(const SimState& state);

struct TileSet {
  std::vector<WangTile> tiles;  // expanded by multiplicity
  GlueFunction glue;
  double tau = 0.0;
};

// Plain-text config: header "tau=<t>", tile lines "N,E,S,W,letter,count",
// glue lines "colourA,colourB,strength". '#' starts a comment.
TileSet parse_tileset(std::istream& in);
TileSet load_tileset(const std::string& path);

}  // namespace tileheur
