#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tileheur/heuristics.hpp"
#include "tileheur/percolation.hpp"
#include "tileheur/tsp.hpp"

namespace tileheur {

struct WalkProvenance {
  std::uint64_t cluster_seed = 0;
  double rho = 0.0;
  int start_row = 0;
  int start_col = 0;
  std::vector<std::pair<int, int>> path;  // visited occupied sites, start first
};

// An ordered sequence of heuristics applied as a pipeline.
struct ExecutionThread {
  std::vector<Heuristic> sequence;
  std::optional<WalkProvenance> provenance;

  std::size_t size() const { return sequence.size(); }
  std::string encoding() const;
  bool deterministic() const;  // true when no element is stochastic
};

std::string encode_thread(const ExecutionThread& thread);
ExecutionThread decode_thread(const std::string& encoding);

// Collects one thread by random walk: a uniformly chosen occupied start
// site contributes the first heuristic; each step moves to a uniform
// 4-neighbour, appending its heuristic if occupied and stopping at the
// first empty or off-lattice site. Revisits append duplicates.
ExecutionThread collect_thread(const Cluster& cluster, Rng& rng);

struct ThreadRunResult {
  Tour final_tour;
  std::int64_t final_length = 0;
  std::int64_t gap = 0;
  std::vector<std::int64_t> per_step_lengths;  // non-increasing
};

// Applies the pipeline to `tour`; `optimum` is the instance's known optimal
// length used for the gap.
ThreadRunResult apply_thread(const ExecutionThread& thread, const TspInstance& instance,
                             const Tour& tour, std::int64_t optimum, Rng& rng);

// One encoding per line, optionally followed by
// "# rho=<r> cluster_seed=<s> start=<row>,<col>".
void write_threads(std::ostream& out, const std::vector<ExecutionThread>& threads);
std::vector<ExecutionThread> read_threads(std::istream& in);
void save_threads(const std::string& path, const std::vector<ExecutionThread>& threads);
std::vector<ExecutionThread> load_threads(const std::string& path);

}  // namespace tileheur
