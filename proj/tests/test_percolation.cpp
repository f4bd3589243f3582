#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tileheur/percolation.hpp"

using namespace tileheur;

namespace {

const std::vector<Heuristic> kPalette(kAllHeuristics.begin(), kAllHeuristics.end());

}  // namespace

TEST_CASE("rho 0 leaves every site empty, rho 1 fills all of them") {
  Rng rng(1);
  const auto empty = generate_cluster(20, 20, 0.0, kPalette, rng);
  CHECK(empty.occupied_count() == 0);
  CHECK(occupied_sites(empty).empty());

  const auto full = generate_cluster(20, 20, 1.0, kPalette, rng);
  CHECK(full.occupied_count() == 400);
}

TEST_CASE("single-kind palette fills a full cluster uniformly") {
  Rng rng(2);
  const auto cluster = generate_cluster(2, 2, 1.0, {Heuristic::kTwoOpt}, rng);
  const auto sites = occupied_sites(cluster);
  REQUIRE(sites.size() == 4);
  for (const auto& site : sites) CHECK(site.kind == Heuristic::kTwoOpt);
}

TEST_CASE("occupied_sites is row-major and counts match") {
  Rng rng(3);
  const auto cluster = generate_cluster(7, 5, 0.45, kPalette, rng);
  const auto sites = occupied_sites(cluster);
  CHECK(static_cast<int>(sites.size()) == cluster.occupied_count());
  for (std::size_t i = 1; i < sites.size(); ++i) {
    const bool ordered = sites[i - 1].row < sites[i].row ||
                         (sites[i - 1].row == sites[i].row && sites[i - 1].col < sites[i].col);
    CHECK(ordered);
  }
  for (const auto& site : sites) CHECK(cluster.at(site.row, site.col) == site.kind);
}

TEST_CASE("mean occupied fraction sits near rho") {
  double total = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    Rng rng(derive_seed(1000, rep));
    total += generate_cluster(20, 20, 0.5, kPalette, rng).occupied_count() / 400.0;
  }
  const double mean = total / 500.0;
  const double sigma = std::sqrt(0.25 / 400.0);
  CHECK(std::abs(mean - 0.5) < 3.0 * sigma);
}

TEST_CASE("generation is reproducible bit for bit") {
  Rng a(77), b(77);
  const auto c1 = generate_cluster(20, 20, 0.3, kPalette, a, 77);
  const auto c2 = generate_cluster(20, 20, 0.3, kPalette, b, 77);
  CHECK(c1.sites == c2.sites);
  CHECK(c1.seed == c2.seed);
}

TEST_CASE("parameter validation") {
  Rng rng(1);
  CHECK_THROWS(generate_cluster(0, 5, 0.5, kPalette, rng));
  CHECK_THROWS(generate_cluster(5, 5, -0.1, kPalette, rng));
  CHECK_THROWS(generate_cluster(5, 5, 1.5, kPalette, rng));
  CHECK_THROWS(generate_cluster(5, 5, 0.5, {}, rng));
}

TEST_CASE("cluster text format round-trips") {
  Rng rng(12345);
  const auto cluster = generate_cluster(9, 4, 0.6, kPalette, rng, 12345);
  std::ostringstream out;
  write_cluster(out, cluster);
  const std::string text = out.str();
  CHECK(text.rfind("rho=0.6 seed=12345\n", 0) == 0);
  std::istringstream in{text};
  const auto back = read_cluster(in);
  CHECK(back.sites == cluster.sites);
  CHECK(back.width == cluster.width);
  CHECK(back.height == cluster.height);
  CHECK(back.rho == cluster.rho);
  CHECK(back.seed == cluster.seed);

  std::istringstream bad{"rho=0.5 seed=1\nC..\nC.\n"};
  CHECK_THROWS(read_cluster(bad));
}

TEST_CASE("occupancy follows the site binomial at rho 0.5") {
  const int samples = 600;
  std::vector<int> counts(401, 0);
  for (int rep = 0; rep < samples; ++rep) {
    Rng rng(derive_seed(5050, rep));
    ++counts[generate_cluster(20, 20, 0.5, kPalette, rng).occupied_count()];
  }
  const auto pmf = oracles::binomial_pmf(400, 0.5);
  CHECK(oracles::chi_square_fit_pvalue(counts, pmf, samples) > 0.01);
}

TEST_CASE("heuristic letters are uniform over occupied sites") {
  std::vector<long long> letter_counts(kHeuristicCount, 0);
  for (int rep = 0; rep < 300; ++rep) {
    Rng rng(derive_seed(7070, rep));
    const auto cluster = generate_cluster(20, 20, 0.5, kPalette, rng);
    for (const auto& site : occupied_sites(cluster))
      ++letter_counts[static_cast<int>(site.kind)];
  }
  CHECK(oracles::chi_square_uniform_pvalue(letter_counts) > 0.01);
}
