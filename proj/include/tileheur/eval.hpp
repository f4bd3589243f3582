#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tileheur/threads.hpp"

namespace tileheur {

struct DistributionSummary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  std::vector<double> outliers;  // outside 1.5 * IQR of [q1, q3]
};

// Five-number summary with linear interpolation between closest ranks
// (the "type 7" quartile convention).
DistributionSummary summarize(std::vector<double> values);

struct EvalGroup {
  std::string label;
  std::vector<double> gaps;
  DistributionSummary summary;
};

struct EvalReport {
  std::vector<EvalGroup> groups;
};

// Mean gap over (reference tours x repetitions). Each (tour, repetition)
// pair applies the thread with its own stream derived from `seed`.
double score_thread(const ExecutionThread& thread, const TspInstance& instance,
                    const DisturbedTourSet& tours, std::int64_t optimum,
                    int repetitions, std::uint64_t seed);

ExecutionThread random_thread(std::size_t length, const std::vector<Heuristic>& palette,
                              Rng& rng);

// For each candidate, n_random comparison rounds: the candidate is scored
// and a fresh uniform random thread of identical length is scored. With
// reevaluate_candidates = false the candidate's first score is reused in
// every round. Group labels: the candidate labels plus RNDs<i>.
EvalReport vis_a_vis(const std::vector<std::pair<std::string, ExecutionThread>>& candidates,
                     const TspInstance& instance, const DisturbedTourSet& tours,
                     std::int64_t optimum, int n_random, int repetitions,
                     const std::vector<Heuristic>& palette, std::uint64_t seed,
                     int jobs = 1, bool reevaluate_candidates = true);

// raw CSV: one column per label (sorted), one row per comparison round.
// summary CSV: label,min,q1,median,q3,max,outliers with the quartile rule
// declared on the first line.
void export_report(const EvalReport& report, const std::filesystem::path& raw_csv,
                   const std::filesystem::path& summary_csv);

}  // namespace tileheur
