#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tileheur/rng.hpp"

namespace tileheur {

struct City {
  int id = 0;  // 0-based internal index
  double x = 0.0;
  double y = 0.0;
};

// Symmetric Euclidean instance with the TSPLIB EUC_2D metric: distances are
// rounded to the nearest integer. The full distance matrix is precomputed.
class TspInstance {
 public:
  TspInstance(std::string name, std::vector<City> cities);

  static TspInstance from_points(std::string name,
                                 const std::vector<std::pair<double, double>>& pts);

  const std::string& name() const { return name_; }
  int size() const { return n_; }
  const std::vector<City>& cities() const { return cities_; }

  std::int32_t distance(int a, int b) const { return dist_[a * n_ + b]; }
  const std::int32_t* dist_row(int a) const { return dist_.data() + a * n_; }

 private:
  std::string name_;
  std::vector<City> cities_;
  int n_ = 0;
  std::vector<std::int32_t> dist_;
};

// A tour is a cyclic permutation of 0..n-1 in path representation.
struct Tour {
  std::vector<int> order;

  int size() const { return static_cast<int>(order.size()); }
  bool operator==(const Tour&) const = default;
};

bool is_permutation_of(const Tour& tour, int n);

std::int64_t tour_length(const TspInstance& instance, const Tour& tour);

// `length - optimum`; optimum must be positive.
std::int64_t gap_to_optimum(std::int64_t length, std::int64_t optimum);

// Applies `swaps` successive exchanges of two uniformly chosen positions
// (the two positions may coincide).
Tour disturb_tour(const Tour& tour, int swaps, Rng& rng);

struct DisturbedTourSet {
  std::vector<Tour> tours;
  int swaps_applied = 0;
  Tour source;
  std::uint64_t seed = 0;
};

// `count` disturbed tours, each from an independent stream derived from
// `seed` (stream kStreamDisturb, tag = tour index).
DisturbedTourSet make_disturbed_tours(const Tour& optimum, int count, int swaps,
                                      std::uint64_t seed);

// TSPLIB readers/writers. Only NODE_COORD_SECTION instances with
// EDGE_WEIGHT_TYPE EUC_2D are accepted; 1-based ids are mapped to 0-based
// at the file boundary.
TspInstance parse_tsplib(std::istream& in);
TspInstance load_tsplib(const std::string& path);

// .tour / .opt.tour files: TOUR_SECTION, 1-based ids, terminated by -1.
// expected_n < 0 skips the dimension cross-check.
Tour parse_tour(std::istream& in, int expected_n = -1);
Tour load_tour(const std::string& path, int expected_n = -1);
void write_tour(std::ostream& out, const Tour& tour, const std::string& name);
void save_tour(const std::string& path, const Tour& tour, const std::string& name);

}  // namespace tileheur
