#include "tileheur/percolation.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tileheur/util.hpp"

namespace tileheur {

int Cluster::occupied_count() const {
  int count = 0;
  for (auto s : sites)
    if (s >= 0) ++count;
  return count;
}

Cluster generate_cluster(int width, int height, double rho,
                         const std::vector<Heuristic>& palette, Rng& rng,
                         std::uint64_t seed) {
  if (width < 1 || height < 1) throw std::runtime_error("lattice dimensions must be >= 1");
  if (rho < 0.0 || rho > 1.0) throw std::runtime_error("rho must lie in [0, 1]");
  if (palette.empty()) throw std::runtime_error("heuristic palette is empty");
  Cluster cluster;
  cluster.width = width;
  cluster.height = height;
  cluster.rho = rho;
  cluster.seed = seed;
  cluster.sites.assign(static_cast<std::size_t>(width) * height, -1);
  for (auto& site : cluster.sites) {
    if (rng.unit() < rho) {
      const auto pick = palette[rng.index(static_cast<int>(palette.size()))];
      site = static_cast<std::int16_t>(pick);
    }
  }
  return cluster;
}

std::vector<OccupiedSite> occupied_sites(const Cluster& cluster) {
  std::vector<OccupiedSite> out;
  for (int r = 0; r < cluster.height; ++r)
    for (int c = 0; c < cluster.width; ++c)
      if (cluster.occupied(r, c)) out.push_back({r, c, cluster.at(r, c)});
  return out;
}

void write_cluster(std::ostream& out, const Cluster& cluster) {
  out << "rho=" << format_double(cluster.rho) << " seed=" << cluster.seed << "\n";
  for (int r = 0; r < cluster.height; ++r) {
    for (int c = 0; c < cluster.width; ++c)
      out << (cluster.occupied(r, c) ? letter_of(cluster.at(r, c)) : '.');
    out << "\n";
  }
}

Cluster read_cluster(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty cluster file");
  Cluster cluster;
  for (const auto& token : split(trim(header), ' ')) {
    auto kv = split(token, '=');
    if (kv.size() != 2) throw std::runtime_error("malformed cluster header: '" + header + "'");
    if (kv[0] == "rho") cluster.rho = parse_double(kv[1], "rho");
    else if (kv[0] == "seed") cluster.seed = parse_uint(kv[1], "seed");
    else throw std::runtime_error("unknown cluster header field: '" + kv[0] + "'");
  }
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::string t(trim(line));
    if (t.empty()) continue;
    rows.push_back(t);
  }
  if (rows.empty()) throw std::runtime_error("cluster file has no grid rows");
  cluster.height = static_cast<int>(rows.size());
  cluster.width = static_cast<int>(rows[0].size());
  cluster.sites.assign(static_cast<std::size_t>(cluster.width) * cluster.height, -1);
  for (int r = 0; r < cluster.height; ++r) {
    if (static_cast<int>(rows[r].size()) != cluster.width)
      throw std::runtime_error("cluster rows have unequal width");
    for (int c = 0; c < cluster.width; ++c) {
      const char ch = rows[r][c];
      if (ch == '.') continue;
      cluster.sites[r * cluster.width + c] = static_cast<std::int16_t>(kind_of(ch));
    }
  }
  return cluster;
}

void save_cluster(const std::string& path, const Cluster& cluster) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write cluster file: " + path);
  write_cluster(out, cluster);
}

Cluster load_cluster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cluster file: " + path);
  try {
    return read_cluster(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace tileheur
