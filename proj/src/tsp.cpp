#include "tileheur/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tileheur/util.hpp"

namespace tileheur {

namespace {

std::int32_t euc2d(const City& a, const City& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  // TSPLIB nint(): round to nearest integer.
  return static_cast<std::int32_t>(std::sqrt(dx * dx + dy * dy) + 0.5);
}

}  // namespace

TspInstance::TspInstance(std::string name, std::vector<City> cities)
    : name_(std::move(name)), cities_(std::move(cities)) {
  n_ = static_cast<int>(cities_.size());
  if (n_ < 3) throw std::runtime_error("instance needs at least 3 cities");
  for (int i = 0; i < n_; ++i) {
    if (cities_[i].id != i)
      throw std::runtime_error("city ids must be contiguous 0..n-1");
  }
  dist_.resize(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i) {
    dist_[i * n_ + i] = 0;
    for (int j = i + 1; j < n_; ++j) {
      const std::int32_t d = euc2d(cities_[i], cities_[j]);
      dist_[i * n_ + j] = d;
      dist_[j * n_ + i] = d;
    }
  }
}

TspInstance TspInstance::from_points(std::string name,
                                     const std::vector<std::pair<double, double>>& pts) {
  std::vector<City> cities;
  cities.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    cities.push_back({static_cast<int>(i), pts[i].first, pts[i].second});
  return TspInstance(std::move(name), std::move(cities));
}

bool is_permutation_of(const Tour& tour, int n) {
  if (tour.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (int c : tour.order) {
    if (c < 0 || c >= n || seen[c]) return false;
    seen[c] = true;
  }
  return true;
}

std::int64_t tour_length(const TspInstance& instance, const Tour& tour) {
  const int n = instance.size();
  if (tour.size() != n)
    throw std::runtime_error("tour size " + std::to_string(tour.size()) +
                             " does not match instance size " + std::to_string(n));
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i)
    total += instance.distance(tour.order[i], tour.order[(i + 1) % n]);
  return total;
}

std::int64_t gap_to_optimum(std::int64_t length, std::int64_t optimum) {
  if (optimum <= 0) throw std::runtime_error("optimum must be positive");
  return length - optimum;
}

Tour disturb_tour(const Tour& tour, int swaps, Rng& rng) {
  if (swaps < 0) throw std::runtime_error("swap count must be non-negative");
  Tour out = tour;
  const int n = out.size();
  for (int s = 0; s < swaps; ++s) {
    const int a = rng.index(n);
    const int b = rng.index(n);
    std::swap(out.order[a], out.order[b]);
  }
  return out;
}

DisturbedTourSet make_disturbed_tours(const Tour& optimum, int count, int swaps,
                                      std::uint64_t seed) {
  DisturbedTourSet set;
  set.swaps_applied = swaps;
  set.source = optimum;
  set.seed = seed;
  const std::uint64_t base = derive_seed(seed, kStreamDisturb);
  set.tours.reserve(count);
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(base, static_cast<std::uint64_t>(i)));
    set.tours.push_back(disturb_tour(optimum, swaps, rng));
  }
  return set;
}

namespace {

// TSPLIB headers are "KEY : VALUE" with optional spaces around the colon.
bool header_line(const std::string& line, std::string& key, std::string& value) {
  auto pos = line.find(':');
  if (pos == std::string::npos) return false;
  key = std::string(trim(line.substr(0, pos)));
  value = std::string(trim(line.substr(pos + 1)));
  return !key.empty();
}

}  // namespace

TspInstance parse_tsplib(std::istream& in) {
  std::string name = "unnamed";
  int dimension = -1;
  std::string weight_type;
  bool in_coords = false;
  std::vector<City> cities;
  std::vector<bool> seen;

  std::string line;
  while (std::getline(in, line)) {
    std::string t(trim(line));
    if (t.empty()) continue;
    if (!in_coords) {
      if (t == "NODE_COORD_SECTION") {
        if (dimension <= 0) throw std::runtime_error("DIMENSION missing or invalid");
        if (weight_type != "EUC_2D")
          throw std::runtime_error("unsupported EDGE_WEIGHT_TYPE '" + weight_type + "'");
        cities.resize(dimension);
        seen.assign(dimension, false);
        in_coords = true;
        continue;
      }
      if (t == "EOF") break;
      std::string key, value;
      if (!header_line(t, key, value)) {
        if (t == "EDGE_WEIGHT_SECTION" || t == "DISPLAY_DATA_SECTION")
          throw std::runtime_error("missing NODE_COORD_SECTION");
        throw std::runtime_error("malformed header line: '" + t + "'");
      }
      if (key == "NAME") name = value;
      else if (key == "DIMENSION") dimension = static_cast<int>(parse_int(value, "DIMENSION"));
      else if (key == "EDGE_WEIGHT_TYPE") weight_type = value;
      // TYPE, COMMENT and the rest are ignored.
      continue;
    }
    if (t == "EOF") break;
    std::istringstream ls{t};
    long long id;
    double x, y;
    if (!(ls >> id >> x >> y))
      throw std::runtime_error("malformed coordinate line: '" + t + "'");
    if (id < 1 || id > dimension)
      throw std::runtime_error("node id " + std::to_string(id) + " out of range 1.." +
                               std::to_string(dimension));
    const int idx = static_cast<int>(id - 1);
    if (seen[idx]) throw std::runtime_error("duplicate node id " + std::to_string(id));
    seen[idx] = true;
    cities[idx] = {idx, x, y};
  }
  if (!in_coords) throw std::runtime_error("missing NODE_COORD_SECTION");
  for (int i = 0; i < dimension; ++i)
    if (!seen[i]) throw std::runtime_error("missing node id " + std::to_string(i + 1));
  return TspInstance(std::move(name), std::move(cities));
}

TspInstance load_tsplib(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  try {
    return parse_tsplib(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Tour parse_tour(std::istream& in, int expected_n) {
  bool in_tour = false;
  int dimension = -1;
  std::vector<int> order;
  std::string line;
  bool terminated = false;
  while (std::getline(in, line) && !terminated) {
    std::string t(trim(line));
    if (t.empty()) continue;
    if (!in_tour) {
      if (t == "TOUR_SECTION") {
        in_tour = true;
        continue;
      }
      if (t == "EOF") break;
      std::string key, value;
      if (header_line(t, key, value)) {
        if (key == "DIMENSION") dimension = static_cast<int>(parse_int(value, "DIMENSION"));
        continue;
      }
      throw std::runtime_error("malformed tour header line: '" + t + "'");
    }
    std::istringstream ls{t};
    long long id;
    while (ls >> id) {
      if (id == -1) {
        terminated = true;
        break;
      }
      order.push_back(static_cast<int>(id - 1));
    }
  }
  if (!in_tour) throw std::runtime_error("missing TOUR_SECTION");
  if (!terminated) throw std::runtime_error("tour not terminated by -1");
  Tour tour{std::move(order)};
  const int n = expected_n >= 0 ? expected_n : (dimension >= 0 ? dimension : tour.size());
  if (!is_permutation_of(tour, n))
    throw std::runtime_error("tour is not a permutation of 1.." + std::to_string(n));
  return tour;
}

Tour load_tour(const std::string& path, int expected_n) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tour file: " + path);
  try {
    return parse_tour(in, expected_n);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_tour(std::ostream& out, const Tour& tour, const std::string& name) {
  out << "NAME : " << name << "\n";
  out << "TYPE : TOUR\n";
  out << "DIMENSION : " << tour.size() << "\n";
  out << "TOUR_SECTION\n";
  for (int c : tour.order) out << (c + 1) << "\n";
  out << "-1\nEOF\n";
}

void save_tour(const std::string& path, const Tour& tour, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tour file: " + path);
  write_tour(out, tour, name);
}

}  // namespace tileheur
