#include "tileheur/wang.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "tileheur/util.hpp"

namespace tileheur {

void GlueFunction::set(int a, int b, double strength) {
  if (strength < 0.0) throw std::runtime_error("glue strength must be non-negative");
  table_[{std::min(a, b), std::max(a, b)}] = strength;
}

double GlueFunction::strength(int a, int b) const {
  auto it = table_.find({std::min(a, b), std::max(a, b)});
  return it == table_.end() ? 0.0 : it->second;
}

SimState::SimState(std::vector<WangTile> tiles, GlueFunction glue, int width,
                   int height, double tau, Rng& rng)
    : width_(width), height_(height), tau_(tau), tiles_(std::move(tiles)),
      glue_(std::move(glue)) {
  if (width_ < 1 || height_ < 1) throw std::runtime_error("lattice dimensions must be >= 1");
  if (tau_ < 0.0) throw std::runtime_error("tau must be non-negative");
  const int cells = width_ * height_;
  const int count = static_cast<int>(tiles_.size());
  if (count > cells)
    throw std::runtime_error("tile count " + std::to_string(count) +
                             " exceeds lattice capacity " + std::to_string(cells));
  rows_.resize(count);
  cols_.resize(count);
  frozen_.assign(count, false);
  lattice_.assign(cells, -1);

  // Uniform placement on distinct cells: partial Fisher-Yates over cell ids.
  std::vector<int> cell_ids(cells);
  std::iota(cell_ids.begin(), cell_ids.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = i + rng.index(cells - i);
    std::swap(cell_ids[i], cell_ids[j]);
    rows_[i] = cell_ids[i] / width_;
    cols_[i] = cell_ids[i] % width_;
    lattice_[cell_ids[i]] = i;
  }
}

double SimState::contact_strength(int id) const {
  static constexpr int kDr[4] = {-1, 0, 1, 0};  // N, E, S, W
  static constexpr int kDc[4] = {0, 1, 0, -1};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const int r = rows_[id] + kDr[side];
    const int c = cols_[id] + kDc[side];
    if (r < 0 || r >= height_ || c < 0 || c >= width_) continue;
    const int other = lattice_[r * width_ + c];
    if (other < 0) continue;
    // facing edges: our side `side` meets the other's opposite side
    total += glue_.strength(tiles_[id].edges[side], tiles_[other].edges[(side + 2) % 4]);
  }
  return total;
}

void SimState::step(Rng& rng) {
  static constexpr int kDr[4] = {-1, 0, 1, 0};
  static constexpr int kDc[4] = {0, 1, 0, -1};
  const int count = tile_count();

  // Move phase: fixed id order, blocked moves cancelled.
  for (int id = 0; id < count; ++id) {
    if (frozen_[id]) continue;
    const int dir = rng.index(4);
    const int r = rows_[id] + kDr[dir];
    const int c = cols_[id] + kDc[dir];
    if (r < 0 || r >= height_ || c < 0 || c >= width_) continue;
    if (lattice_[r * width_ + c] >= 0) continue;
    lattice_[rows_[id] * width_ + cols_[id]] = -1;
    rows_[id] = r;
    cols_[id] = c;
    lattice_[r * width_ + c] = id;
  }

  // Sticking phase: evaluate each mobile tile's contacts once; a strength
  // above tau freezes the tile and everything it touches.
  for (int id = 0; id < count; ++id) {
    if (frozen_[id]) continue;
    if (contact_strength(id) <= tau_) continue;
    frozen_[id] = true;
    for (int side = 0; side < 4; ++side) {
      const int r = rows_[id] + kDr[side];
      const int c = cols_[id] + kDc[side];
      if (r < 0 || r >= height_ || c < 0 || c >= width_) continue;
      const int other = lattice_[r * width_ + c];
      if (other >= 0) frozen_[other] = true;
    }
  }
  ++step_count_;
}

void SimState::run(int steps, Rng& rng) {
  for (int s = 0; s < steps; ++s) step(rng);
}

int SimState::frozen_count() const {
  return static_cast<int>(std::count(frozen_.begin(), frozen_.end(), true));
}

SimState init_sim(const std::vector<WangTile>& tiles, GlueFunction glue, int width,
                  int height, double tau, Rng& rng) {
  return SimState(tiles, std::move(glue), width, height, tau, rng);
}

Cluster extract_cluster(const SimState& state) {
  Cluster cluster;
  cluster.width = state.width();
  cluster.height = state.height();
  cluster.sites.assign(static_cast<std::size_t>(cluster.width) * cluster.height, -1);
  int frozen = 0;
  for (int id = 0; id < state.tile_count(); ++id) {
    if (!state.frozen(id)) continue;
    const auto [r, c] = state.position(id);
    cluster.sites[r * cluster.width + c] =
        static_cast<std::int16_t>(state.tile(id).payload);
    ++frozen;
  }
  cluster.rho = static_cast<double>(frozen) / (cluster.width * cluster.height);
  return cluster;
}

TileSet parse_tileset(std::istream& in) {
  TileSet set;
  bool have_tau = false;
  std::unordered_map<std::string, int> colour_ids;
  auto colour_of = [&colour_ids](const std::string& token) {
    return colour_ids.emplace(token, static_cast<int>(colour_ids.size())).first->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    const std::string t(trim(line));
    if (t.empty()) continue;
    const std::string where = "tileset line " + std::to_string(line_no);
    if (t.starts_with("tau=")) {
      set.tau = parse_double(t.substr(4), "tau");
      have_tau = true;
      continue;
    }
    const auto fields = split(t, ',');
    if (fields.size() == 6) {
      WangTile tile;
      for (int side = 0; side < 4; ++side)
        tile.edges[side] = colour_of(std::string(trim(fields[side])));
      const std::string letter(trim(fields[4]));
      if (letter.size() != 1) throw std::runtime_error(where + ": bad heuristic letter");
      tile.payload = kind_of(letter[0]);
      const long long count = parse_int(fields[5], where + " count");
      if (count < 0) throw std::runtime_error(where + ": negative tile count");
      for (long long i = 0; i < count; ++i) set.tiles.push_back(tile);
    } else if (fields.size() == 3) {
      const int a = colour_of(std::string(trim(fields[0])));
      const int b = colour_of(std::string(trim(fields[1])));
      set.glue.set(a, b, parse_double(fields[2], where + " strength"));
    } else {
      throw std::runtime_error(where + ": expected 6 tile fields or 3 glue fields");
    }
  }
  if (!have_tau) throw std::runtime_error("tileset is missing the tau= header");
  return set;
}

TileSet load_tileset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tileset file: " + path);
  try {
    return parse_tileset(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace tileheur
