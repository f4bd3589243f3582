#include "tileheur/eval.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <stdexcept>

#include "tileheur/parallel.hpp"
#include "tileheur/util.hpp"

namespace tileheur {

DistributionSummary summarize(std::vector<double> values) {
  if (values.empty()) throw std::runtime_error("cannot summarise an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  auto quantile = [&values, n](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  DistributionSummary s;
  s.min = values.front();
  s.max = values.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  for (double v : values)
    if (v < lo_fence || v > hi_fence) s.outliers.push_back(v);
  return s;
}

double score_thread(const ExecutionThread& thread, const TspInstance& instance,
                    const DisturbedTourSet& tours, std::int64_t optimum,
                    int repetitions, std::uint64_t seed) {
  if (repetitions < 1) throw std::runtime_error("repetitions must be >= 1");
  if (tours.tours.empty()) throw std::runtime_error("reference tour set is empty");
  // A thread without stochastic elements yields the same tour on every
  // repetition, so one pass per reference tour suffices.
  const int reps = thread.deterministic() ? 1 : repetitions;
  double total = 0.0;
  for (std::size_t t = 0; t < tours.tours.size(); ++t) {
    const std::uint64_t tour_seed = derive_seed(seed, t);
    for (int r = 0; r < reps; ++r) {
      Rng rng(derive_seed(tour_seed, static_cast<std::uint64_t>(r)));
      const auto run = apply_thread(thread, instance, tours.tours[t], optimum, rng);
      total += static_cast<double>(run.gap) * (reps == 1 ? repetitions : 1);
    }
  }
  return total / (static_cast<double>(tours.tours.size()) * repetitions);
}

ExecutionThread random_thread(std::size_t length, const std::vector<Heuristic>& palette,
                              Rng& rng) {
  if (palette.empty()) throw std::runtime_error("heuristic palette is empty");
  ExecutionThread thread;
  thread.sequence.reserve(length);
  for (std::size_t i = 0; i < length; ++i)
    thread.sequence.push_back(palette[rng.index(static_cast<int>(palette.size()))]);
  return thread;
}

EvalReport vis_a_vis(const std::vector<std::pair<std::string, ExecutionThread>>& candidates,
                     const TspInstance& instance, const DisturbedTourSet& tours,
                     std::int64_t optimum, int n_random, int repetitions,
                     const std::vector<Heuristic>& palette, std::uint64_t seed,
                     int jobs, bool reevaluate_candidates) {
  if (n_random < 1) throw std::runtime_error("n_random must be >= 1");
  const int k = static_cast<int>(candidates.size());
  std::vector<std::vector<double>> cand_gaps(k, std::vector<double>(n_random, 0.0));
  std::vector<std::vector<double>> rnd_gaps(k, std::vector<double>(n_random, 0.0));

  // One task per (candidate, round); every task derives its own streams.
  parallel_for(static_cast<std::size_t>(k) * n_random, jobs, [&](std::size_t task) {
    const int c = static_cast<int>(task / n_random);
    const int round = static_cast<int>(task % n_random);
    const auto& thread = candidates[c].second;
    const std::uint64_t cand_base = derive_seed(seed, static_cast<std::uint64_t>(c));
    const std::uint64_t round_base = derive_seed(cand_base, static_cast<std::uint64_t>(round));
    if (reevaluate_candidates || thread.deterministic()) {
      cand_gaps[c][round] =
          score_thread(thread, instance, tours, optimum, repetitions, derive_seed(round_base, 0));
    } else {
      // fixed mode: every round reuses the round-0 stream, i.e. the score
      // is computed once and repeated
      const std::uint64_t round0 = derive_seed(derive_seed(cand_base, 0), 0);
      cand_gaps[c][round] =
          score_thread(thread, instance, tours, optimum, repetitions, round0);
    }
    Rng letters(derive_seed(round_base, 1));
    const ExecutionThread rnd = random_thread(thread.size(), palette, letters);
    assert(rnd.size() == thread.size());
    rnd_gaps[c][round] =
        score_thread(rnd, instance, tours, optimum, repetitions, derive_seed(round_base, 2));
  });

  EvalReport report;
  report.groups.reserve(2 * k);
  for (int c = 0; c < k; ++c) {
    EvalGroup group;
    group.label = candidates[c].first;
    group.gaps = std::move(cand_gaps[c]);
    group.summary = summarize(group.gaps);
    report.groups.push_back(std::move(group));
  }
  for (int c = 0; c < k; ++c) {
    EvalGroup group;
    group.label = "RNDs" + std::to_string(c + 1);
    group.gaps = std::move(rnd_gaps[c]);
    group.summary = summarize(group.gaps);
    report.groups.push_back(std::move(group));
  }
  return report;
}

void export_report(const EvalReport& report, const std::filesystem::path& raw_csv,
                   const std::filesystem::path& summary_csv) {
  std::vector<const EvalGroup*> groups;
  groups.reserve(report.groups.size());
  for (const auto& g : report.groups) groups.push_back(&g);
  std::sort(groups.begin(), groups.end(),
            [](const EvalGroup* a, const EvalGroup* b) { return a->label < b->label; });

  std::ofstream raw(raw_csv);
  if (!raw) throw std::runtime_error("cannot write " + raw_csv.string());
  std::size_t rows = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    raw << (i ? "," : "") << groups[i]->label;
    rows = std::max(rows, groups[i]->gaps.size());
  }
  raw << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (i) raw << ",";
      if (r < groups[i]->gaps.size()) raw << format_double(groups[i]->gaps[r]);
    }
    raw << "\n";
  }

  std::ofstream summary(summary_csv);
  if (!summary) throw std::runtime_error("cannot write " + summary_csv.string());
  summary << "# quartiles: linear interpolation between closest ranks (type 7)\n";
  summary << "label,min,q1,median,q3,max,outliers\n";
  for (const auto* g : groups) {
    const auto& s = g->summary;
    summary << g->label << "," << format_double(s.min) << "," << format_double(s.q1)
            << "," << format_double(s.median) << "," << format_double(s.q3) << ","
            << format_double(s.max) << ",";
    for (std::size_t i = 0; i < s.outliers.size(); ++i)
      summary << (i ? ";" : "") << format_double(s.outliers[i]);
    summary << "\n";
  }
}

}  // namespace tileheur
