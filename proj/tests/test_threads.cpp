#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "tileheur/threads.hpp"

using namespace tileheur;

namespace {

Cluster make_cluster(int width, int height, const std::vector<std::int16_t>& sites,
                     double rho = 0.5, std::uint64_t seed = 0) {
  Cluster c;
  c.width = width;
  c.height = height;
  c.rho = rho;
  c.seed = seed;
  c.sites = sites;
  return c;
}

constexpr std::int16_t kEmpty = -1;
constexpr std::int16_t kC = static_cast<std::int16_t>(Heuristic::kTwoOpt);
constexpr std::int16_t kE = static_cast<std::int16_t>(Heuristic::kOrOpt);

}  // namespace

TEST_CASE("encode/decode follow the letter table") {
  ExecutionThread te;
  te.sequence = {Heuristic::kTwoExchange, Heuristic::kOrOpt};
  CHECK(encode_thread(te) == "TE");

  const auto cet = decode_thread("TEEDGCGGCDDACT");
  CHECK(cet.size() == 14);
  CHECK(cet.encoding() == "TEEDGCGGCDDACT");

  CHECK_THROWS(decode_thread("TEX"));

  Rng rng(31);
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  for (int trial = 0; trial < 100; ++trial) {
    ExecutionThread t;
    const int len = 1 + rng.index(20);
    for (int i = 0; i < len; ++i)
      t.sequence.push_back(palette[rng.index(kHeuristicCount)]);
    CHECK(decode_thread(encode_thread(t)).sequence == t.sequence);
  }
}

TEST_CASE("a single occupied site always yields a length-1 thread") {
  const auto cluster = make_cluster(3, 3, {kEmpty, kEmpty, kEmpty,
                                           kEmpty, kC, kEmpty,
                                           kEmpty, kEmpty, kEmpty});
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng(derive_seed(42, trial));
    const auto thread = collect_thread(cluster, rng);
    REQUIRE(thread.size() == 1);
    CHECK(thread.sequence[0] == Heuristic::kTwoOpt);
    REQUIRE(thread.provenance.has_value());
    CHECK(thread.provenance->start_row == 1);
    CHECK(thread.provenance->start_col == 1);
  }
}

TEST_CASE("collection on a full cluster walks until it leaves the lattice") {
  Rng gen(7);
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  const auto cluster = generate_cluster(5, 5, 1.0, palette, gen);
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(55, trial));
    const auto thread = collect_thread(cluster, rng);
    REQUIRE(thread.size() >= 1);
    REQUIRE(thread.provenance.has_value());
    CHECK(thread.provenance->path.size() == thread.size());
    for (const auto& [r, c] : thread.provenance->path) CHECK(cluster.occupied(r, c));
  }
}

TEST_CASE("collection throws on an empty cluster") {
  const auto cluster = make_cluster(2, 2, {kEmpty, kEmpty, kEmpty, kEmpty});
  Rng rng(1);
  CHECK_THROWS(collect_thread(cluster, rng));
}

TEST_CASE("walk distribution on a 1x3 strip matches exact enumeration") {
  // sites: [2-opt][or-opt][empty]. From either occupied site, 3 of the 4
  // directions end the walk and 1 continues, so
  //   P(len = k) = (1/4)^(k-1) * 3/4, letters alternating from the start.
  const auto cluster = make_cluster(3, 1, {kC, kE, kEmpty});
  const int samples = 10000;
  std::map<std::string, int> freq;
  for (int i = 0; i < samples; ++i) {
    Rng rng(derive_seed(909, i));
    ++freq[collect_thread(cluster, rng).encoding()];
  }
  const auto check_freq = [&freq, samples](const std::string& enc, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) / samples);
    const double observed = static_cast<double>(freq[enc]) / samples;
    INFO(enc, " observed=", observed, " expected=", p);
    CHECK(std::abs(observed - p) < 3.0 * sigma);
  };
  check_freq("C", 0.5 * 0.75);
  check_freq("E", 0.5 * 0.75);
  check_freq("CE", 0.5 * 0.25 * 0.75);
  check_freq("EC", 0.5 * 0.25 * 0.75);
  check_freq("CEC", 0.5 * 0.25 * 0.25 * 0.75);
}

TEST_CASE("collection replays exactly under the same seed") {
  Rng gen(8);
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  const auto cluster = generate_cluster(10, 10, 0.7, palette, gen, 8);
  for (int trial = 0; trial < 20; ++trial) {
    Rng r1(derive_seed(3, trial)), r2(derive_seed(3, trial));
    const auto a = collect_thread(cluster, r1);
    const auto b = collect_thread(cluster, r2);
    CHECK(a.sequence == b.sequence);
    CHECK(a.provenance->path == b.provenance->path);
  }
}

TEST_CASE("empty thread application is the identity") {
  Rng rng(5);
  const auto inst = oracles::random_instance(8, rng);
  const Tour tour = oracles::random_tour(8, rng);
  const auto base = tour_length(inst, tour);
  ExecutionThread empty;
  Rng run_rng(1);
  const auto result = apply_thread(empty, inst, tour, 100, run_rng);
  CHECK(result.final_tour == tour);
  CHECK(result.final_length == base);
  CHECK(result.gap == base - 100);
  CHECK(result.per_step_lengths.empty());
}

TEST_CASE("pipelines never worsen and record non-increasing lengths") {
  Rng rng(2024);
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 6 + rng.index(20);
    const auto inst = oracles::random_instance(n, rng);
    const Tour tour = oracles::random_tour(n, rng);
    ExecutionThread thread;
    const int len = 1 + rng.index(8);
    for (int i = 0; i < len; ++i)
      thread.sequence.push_back(palette[rng.index(kHeuristicCount)]);
    Rng run_rng(rng.next_u64());
    const auto result = apply_thread(thread, inst, tour, 1, run_rng);
    REQUIRE(result.per_step_lengths.size() == thread.size());
    std::int64_t prev = tour_length(inst, tour);
    for (const auto len_after : result.per_step_lengths) {
      REQUIRE(len_after <= prev);
      prev = len_after;
    }
    REQUIRE(result.final_length == prev);
    REQUIRE(result.final_length == tour_length(inst, result.final_tour));
    REQUIRE(is_permutation_of(result.final_tour, n));
  }
}

TEST_CASE("a short stochastic pipeline can reach the optimum of a displaced ring") {
  // ten cities on a circle: the hull order is optimal; start from a tour
  // with two vertices exchanged
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 10; ++i) {
    const double angle = 2.0 * 3.14159265358979 * i / 10.0;
    pts.emplace_back(100.0 * std::cos(angle), 100.0 * std::sin(angle));
  }
  const auto inst = TspInstance::from_points("ring", pts);
  Tour start{{0, 1, 5, 3, 4, 2, 6, 7, 8, 9}};
  const auto optimum = oracles::brute_force_optimum(inst);
  const auto thread = decode_thread("TTA");
  int reached = 0;
  for (int seed = 0; seed < 300; ++seed) {
    Rng rng(derive_seed(1234, seed));
    const auto result = apply_thread(thread, inst, start, optimum, rng);
    if (result.final_length == optimum) ++reached;
    REQUIRE(result.final_length >= optimum);
  }
  CHECK(reached > 0);
}

TEST_CASE("thread files round-trip with provenance") {
  std::vector<ExecutionThread> threads;
  ExecutionThread a = decode_thread("CDE");
  WalkProvenance prov;
  prov.cluster_seed = 777;
  prov.rho = 0.35;
  prov.start_row = 3;
  prov.start_col = 14;
  a.provenance = prov;
  threads.push_back(a);
  threads.push_back(decode_thread("TG"));

  std::ostringstream out;
  write_threads(out, threads);
  CHECK(out.str() == "CDE # rho=0.35 cluster_seed=777 start=3,14\nTG\n");

  std::istringstream in{out.str()};
  const auto back = read_threads(in);
  REQUIRE(back.size() == 2);
  CHECK(back[0].encoding() == "CDE");
  REQUIRE(back[0].provenance.has_value());
  CHECK(back[0].provenance->cluster_seed == 777);
  CHECK(back[0].provenance->rho == 0.35);
  CHECK(back[0].provenance->start_row == 3);
  CHECK(back[0].provenance->start_col == 14);
  CHECK(back[1].encoding() == "TG");
  CHECK_FALSE(back[1].provenance.has_value());
}
