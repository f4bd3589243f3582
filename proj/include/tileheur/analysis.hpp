#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tileheur/align.hpp"
#include "tileheur/eval.hpp"
#include "tileheur/threads.hpp"

namespace tileheur {

struct Stage1Config {
  std::string instance_path;
  std::string opt_tour_path;
  std::vector<double> rho_values;  // defaults to 0.05 .. 0.95 step 0.05
  int clusters_per_rho = 50;
  int threads_per_cluster = 100;
  int top_k = 5;
  int repetitions = 10;          // evaluation repetitions (`times`)
  int ranking_repetitions = 1;   // the initial ranking scores each thread once
  int n_random = 300;
  int disturbed_tours = 10;
  int swaps = 200;
  int width = 20;
  int height = 20;
  std::uint64_t master_seed = 0;
  bool reevaluate_candidates = true;

  Stage1Config();
  void validate() const;
};

// key=value file, '#' comments. Unknown keys are rejected.
Stage1Config parse_config(std::istream& in);
Stage1Config load_config(const std::string& path);
void write_config(std::ostream& out, const Stage1Config& config);

struct ScoredThread {
  ExecutionThread thread;
  double mean_gap = 0.0;
};

struct RankedThreads {
  std::vector<ScoredThread> entries;  // ascending mean gap, stable
  double rho_group = 0.0;
};

// Scores every thread over (reference tours x repetitions) and sorts stably
// by ascending mean gap. Thread i uses the stream derive_seed(seed, i).
RankedThreads rank_threads(const std::vector<ExecutionThread>& threads,
                           const TspInstance& instance, const DisturbedTourSet& tours,
                           std::int64_t optimum, int repetitions, std::uint64_t seed,
                           int jobs = 1);

struct GroupReport {
  double rho = 0.0;
  std::vector<ExecutionThread> collected;
  RankedThreads ranking;
  std::vector<ExecutionThread> top;  // ETS_f
  bool aligned = false;
  Alignment alignment;
  PatternThread pattern;  // cET
  bool evaluated = false;
  EvalReport eval;
};

struct Stage1Report {
  Stage1Config config;
  std::int64_t optimum = 0;
  DisturbedTourSet tours;
  std::vector<GroupReport> groups;
  std::vector<std::string> notes;  // skipped groups and similar events
};

// Lines 1-7 of the analysis procedure (collection, ranking, filtering,
// alignment, pattern thread) followed by the vis-a-vis evaluation of
// ETS_f plus cET, per rho group.
Stage1Report run_stage1(const Stage1Config& config, const TspInstance& instance,
                        const Tour& optimum_tour, int jobs = 1);
Stage1Report run_stage1(const Stage1Config& config, int jobs = 1);

// Report directory layout:
//   tours/disturbed_<i>.tour   threads/<rho>.txt   ranking/<rho>.csv
//   alignment/<rho>.txt        cet/<rho>.txt       eval/<rho>_{raw,summary}.csv
void write_stage1_report(const Stage1Report& report, const std::filesystem::path& out_dir);

}  // namespace tileheur
