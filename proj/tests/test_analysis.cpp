#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "tileheur/analysis.hpp"
#include "tileheur/percolation.hpp"

using namespace tileheur;
namespace fs = std::filesystem;

namespace {

TspInstance seven_city_instance() {
  Rng rng(70707);
  return oracles::random_instance(7, rng, 500.0);
}

Stage1Config small_config() {
  Stage1Config config;
  config.rho_values = {0.5};
  config.clusters_per_rho = 1;
  config.threads_per_cluster = 5;
  config.top_k = 3;
  config.repetitions = 2;
  config.ranking_repetitions = 1;
  config.n_random = 4;
  config.disturbed_tours = 2;
  config.swaps = 6;
  config.width = 4;
  config.height = 4;
  config.master_seed = 42;
  return config;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void compare_trees(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> rel_a;
  for (const auto& entry : fs::recursive_directory_iterator(a))
    if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a));
  std::sort(rel_a.begin(), rel_a.end());
  std::vector<fs::path> rel_b;
  for (const auto& entry : fs::recursive_directory_iterator(b))
    if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b));
  std::sort(rel_b.begin(), rel_b.end());
  REQUIRE(rel_a == rel_b);
  for (const auto& rel : rel_a) {
    INFO("file ", rel.string());
    REQUIRE(slurp(a / rel) == slurp(b / rel));
  }
}

}  // namespace

TEST_CASE("config defaults cover the full experimental grid") {
  const Stage1Config config;
  REQUIRE(config.rho_values.size() == 19);
  CHECK(config.rho_values.front() == 0.05);
  CHECK(config.rho_values.back() == 0.95);
  CHECK(config.clusters_per_rho == 50);
  CHECK(config.threads_per_cluster == 100);
  CHECK(config.top_k == 5);
  CHECK(config.repetitions == 10);
  CHECK(config.ranking_repetitions == 1);
  CHECK(config.n_random == 300);
  CHECK(config.disturbed_tours == 10);
  CHECK(config.swaps == 200);
  // total planned collection across all groups
  CHECK(static_cast<int>(config.rho_values.size()) * config.clusters_per_rho *
            config.threads_per_cluster ==
        95000);
}

TEST_CASE("config files parse, override and reject unknown keys") {
  std::istringstream in{
      "# desk config\n"
      "instance=data/kroA100.tsp\n"
      "opt_tour=data/kroA100.opt.tour\n"
      "rho=0.3,0.6,0.9\n"
      "clusters_per_rho=10\n"
      "threads_per_cluster=20\n"
      "top_k=5\n"
      "repetitions=3\n"
      "n_random=50\n"
      "disturbed_tours=3\n"
      "master_seed=7\n"};
  const auto config = parse_config(in);
  CHECK(config.instance_path == "data/kroA100.tsp");
  CHECK(config.rho_values == std::vector<double>{0.3, 0.6, 0.9});
  CHECK(config.clusters_per_rho == 10);
  CHECK(config.threads_per_cluster == 20);
  CHECK(config.repetitions == 3);
  CHECK(config.n_random == 50);
  CHECK(config.disturbed_tours == 3);
  CHECK(config.master_seed == 7);
  config.validate();

  std::istringstream unknown{"no_such_key=1\n"};
  CHECK_THROWS(parse_config(unknown));
  std::istringstream bad_rho{"rho=0,0.5\n"};
  CHECK_THROWS(parse_config(bad_rho).validate());

  std::ostringstream out;
  write_config(out, config);
  std::istringstream back{out.str()};
  const auto reparsed = parse_config(back);
  CHECK(reparsed.rho_values == config.rho_values);
  CHECK(reparsed.master_seed == config.master_seed);
  CHECK(reparsed.instance_path == config.instance_path);
}

TEST_CASE("an improving thread outranks the empty thread") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  const auto optimum = tour_length(inst, best);
  const auto tours = make_disturbed_tours(best, 2, 5, 11);

  std::vector<ExecutionThread> threads;
  threads.push_back(ExecutionThread{});         // empty: leaves gaps unchanged
  threads.push_back(decode_thread("C"));        // strictly improves a bad tour
  const auto ranked = rank_threads(threads, inst, tours, optimum, 1, 123);
  REQUIRE(ranked.entries.size() == 2);
  CHECK(ranked.entries[0].thread.encoding() == "C");
  CHECK(ranked.entries[0].mean_gap < ranked.entries[1].mean_gap);
}

TEST_CASE("equal-scoring threads keep their original order") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  const auto optimum = tour_length(inst, best);
  const auto tours = make_disturbed_tours(best, 2, 5, 11);

  std::vector<ExecutionThread> threads;
  for (int i = 0; i < 3; ++i) {
    auto t = decode_thread("CD");
    WalkProvenance prov;
    prov.cluster_seed = 100 + i;  // distinguish identical threads
    t.provenance = prov;
    threads.push_back(t);
  }
  const auto ranked = rank_threads(threads, inst, tours, optimum, 1, 5);
  REQUIRE(ranked.entries.size() == 3);
  CHECK(ranked.entries[0].mean_gap == ranked.entries[1].mean_gap);
  for (int i = 0; i < 3; ++i)
    CHECK(ranked.entries[i].thread.provenance->cluster_seed == 100u + i);
}

TEST_CASE("ranking matches an independent rescoring oracle") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  const auto optimum = tour_length(inst, best);
  const auto tours = make_disturbed_tours(best, 3, 8, 21);

  Rng gen(99);
  std::vector<ExecutionThread> threads;
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  for (int i = 0; i < 12; ++i) {
    ExecutionThread t;
    const int len = 1 + gen.index(5);
    for (int j = 0; j < len; ++j) t.sequence.push_back(palette[gen.index(8)]);
    threads.push_back(t);
  }
  const std::uint64_t seed = 2023;
  const int reps = 3;
  const auto ranked = rank_threads(threads, inst, tours, optimum, reps, seed, 2);

  // independent rescoring: the naive loop over every (tour, repetition)
  // pair with the documented stream derivation; gaps are integers, so this
  // must agree bit-for-bit with any shortcut the library takes
  std::vector<std::pair<double, std::size_t>> expect;
  for (std::size_t i = 0; i < threads.size(); ++i) {
    const std::uint64_t thread_seed = derive_seed(seed, i);
    double total = 0.0;
    for (std::size_t t = 0; t < tours.tours.size(); ++t) {
      const std::uint64_t tour_seed = derive_seed(thread_seed, t);
      for (int r = 0; r < reps; ++r) {
        Rng rng(derive_seed(tour_seed, r));
        total += static_cast<double>(
            apply_thread(threads[i], inst, tours.tours[t], optimum, rng).gap);
      }
    }
    expect.emplace_back(total / (tours.tours.size() * reps), i);
  }
  std::stable_sort(expect.begin(), expect.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  REQUIRE(ranked.entries.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(ranked.entries[i].mean_gap == expect[i].first);
    CHECK(ranked.entries[i].thread.sequence == threads[expect[i].second].sequence);
  }
}

TEST_CASE("run_stage1 executes the whole procedure on a desk-scale input") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  const auto config = small_config();
  const auto report = run_stage1(config, inst, best, 1);

  CHECK(report.optimum == tour_length(inst, best));
  CHECK(report.tours.tours.size() == 2);
  REQUIRE(report.groups.size() == 1);
  const auto& group = report.groups[0];
  CHECK(group.rho == 0.5);
  CHECK(group.collected.size() == 5);
  CHECK(group.ranking.entries.size() == 5);
  CHECK(group.top.size() == 3);
  for (std::size_t i = 1; i < group.ranking.entries.size(); ++i)
    CHECK(group.ranking.entries[i - 1].mean_gap <= group.ranking.entries[i].mean_gap);
  for (const auto& thread : group.collected) {
    REQUIRE(thread.provenance.has_value());
    CHECK(thread.provenance->rho == 0.5);
  }

  REQUIRE(group.aligned);
  REQUIRE(group.alignment.rows.size() == 3);
  for (std::size_t i = 0; i < group.alignment.rows.size(); ++i) {
    std::string degapped;
    for (char ch : group.alignment.rows[i])
      if (ch != '-') degapped.push_back(ch);
    CHECK(degapped == group.top[i].encoding());
  }

  REQUIRE(group.evaluated);
  REQUIRE(group.eval.groups.size() == 8);  // ET1..ET3, cET, RNDs1..RNDs4
  CHECK(group.eval.groups[0].label == "ET1");
  CHECK(group.eval.groups[3].label == "cET");
  CHECK(group.eval.groups[4].label == "RNDs1");
  for (const auto& eg : group.eval.groups) CHECK(eg.gaps.size() == 4);
}

TEST_CASE("run_stage1 replays exactly from the documented seed tree") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  const auto config = small_config();
  const auto report = run_stage1(config, inst, best, 1);
  REQUIRE(report.groups.size() == 1);
  const auto& group = report.groups[0];

  // reference tours
  const auto tours = make_disturbed_tours(best, config.disturbed_tours, config.swaps,
                                          config.master_seed);
  REQUIRE(tours.tours.size() == report.tours.tours.size());
  for (std::size_t i = 0; i < tours.tours.size(); ++i)
    CHECK(tours.tours[i] == report.tours.tours[i]);

  // cluster + walks
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  const std::uint64_t cluster_seed =
      derive_seed(derive_seed(derive_seed(config.master_seed, kStreamCluster), 0), 0);
  Rng cluster_rng(cluster_seed);
  const auto cluster = generate_cluster(config.width, config.height, 0.5, palette,
                                        cluster_rng, cluster_seed);
  const std::uint64_t collect_base =
      derive_seed(derive_seed(derive_seed(config.master_seed, kStreamCollect), 0), 0);
  for (int t = 0; t < config.threads_per_cluster; ++t) {
    Rng walk(derive_seed(collect_base, t));
    const auto thread = collect_thread(cluster, walk);
    CHECK(thread.sequence == group.collected[t].sequence);
    CHECK(thread.provenance->cluster_seed == cluster_seed);
  }

  // ranking scores
  const auto ranked = rank_threads(
      group.collected, inst, tours, report.optimum, config.ranking_repetitions,
      derive_seed(derive_seed(config.master_seed, kStreamRanking), 0), 1);
  REQUIRE(ranked.entries.size() == group.ranking.entries.size());
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    CHECK(ranked.entries[i].mean_gap == group.ranking.entries[i].mean_gap);
    CHECK(ranked.entries[i].thread.sequence == group.ranking.entries[i].thread.sequence);
  }

  // alignment + pattern
  std::vector<std::string> encodings;
  for (const auto& t : group.top) encodings.push_back(t.encoding());
  const auto alignment = align(encodings);
  CHECK(alignment.rows == group.alignment.rows);
  const auto pattern = extract_pattern(alignment);
  CHECK(pattern.thread.sequence == group.pattern.thread.sequence);
  CHECK(pattern.match_columns == group.pattern.match_columns);
}

TEST_CASE("stage1 reports are byte-identical across runs and worker counts") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  auto config = small_config();
  config.clusters_per_rho = 2;
  config.rho_values = {0.4, 0.8};

  const auto dir_a = fs::temp_directory_path() / "tileheur_test_stage1_a";
  const auto dir_b = fs::temp_directory_path() / "tileheur_test_stage1_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  write_stage1_report(run_stage1(config, inst, best, 1), dir_a);
  write_stage1_report(run_stage1(config, inst, best, 4), dir_b);
  compare_trees(dir_a, dir_b);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("groups whose clusters stay empty are skipped with a note") {
  const auto inst = seven_city_instance();
  Tour best;
  oracles::brute_force_optimum(inst, &best);
  auto config = small_config();
  // 1x1 lattice at the smallest allowed rho: the single site stays empty
  // for this seed, so the group cannot produce any threads
  config.rho_values = {1e-12};
  config.width = 1;
  config.height = 1;
  config.master_seed = 3;
  const auto report = run_stage1(config, inst, best, 1);
  CHECK(report.groups.empty());
  REQUIRE(report.notes.size() == 1);
  CHECK(report.notes[0].find("skipped") != std::string::npos);
}
