#include "tileheur/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "tileheur/parallel.hpp"
#include "tileheur/percolation.hpp"
#include "tileheur/util.hpp"

namespace tileheur {

Stage1Config::Stage1Config() {
  rho_values.reserve(19);
  for (int i = 1; i <= 19; ++i) rho_values.push_back(i / 20.0);
}

void Stage1Config::validate() const {
  if (rho_values.empty()) throw std::runtime_error("config: no rho values");
  for (double rho : rho_values)
    if (!(rho > 0.0 && rho <= 1.0))
      throw std::runtime_error("config: rho " + format_double(rho) + " outside (0, 1]");
  if (clusters_per_rho < 1) throw std::runtime_error("config: clusters_per_rho must be >= 1");
  if (threads_per_cluster < 1) throw std::runtime_error("config: threads_per_cluster must be >= 1");
  if (top_k < 1) throw std::runtime_error("config: top_k must be >= 1");
  if (repetitions < 1) throw std::runtime_error("config: repetitions must be >= 1");
  if (ranking_repetitions < 1) throw std::runtime_error("config: ranking_repetitions must be >= 1");
  if (n_random < 1) throw std::runtime_error("config: n_random must be >= 1");
  if (disturbed_tours < 1) throw std::runtime_error("config: disturbed_tours must be >= 1");
  if (swaps < 0) throw std::runtime_error("config: swaps must be >= 0");
  if (width < 1 || height < 1) throw std::runtime_error("config: lattice dimensions must be >= 1");
}

Stage1Config parse_config(std::istream& in) {
  Stage1Config config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    const std::string t(trim(line));
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key=value, got '" + t + "'");
    const std::string key(trim(t.substr(0, eq)));
    const std::string value(trim(t.substr(eq + 1)));
    if (key == "instance") config.instance_path = value;
    else if (key == "opt_tour") config.opt_tour_path = value;
    else if (key == "rho") {
      config.rho_values.clear();
      for (const auto& item : split(value, ','))
        config.rho_values.push_back(parse_double(item, "rho"));
    } else if (key == "clusters_per_rho") config.clusters_per_rho = static_cast<int>(parse_int(value, key));
    else if (key == "threads_per_cluster") config.threads_per_cluster = static_cast<int>(parse_int(value, key));
    else if (key == "top_k") config.top_k = static_cast<int>(parse_int(value, key));
    else if (key == "repetitions") config.repetitions = static_cast<int>(parse_int(value, key));
    else if (key == "ranking_repetitions") config.ranking_repetitions = static_cast<int>(parse_int(value, key));
    else if (key == "n_random") config.n_random = static_cast<int>(parse_int(value, key));
    else if (key == "disturbed_tours") config.disturbed_tours = static_cast<int>(parse_int(value, key));
    else if (key == "swaps") config.swaps = static_cast<int>(parse_int(value, key));
    else if (key == "width") config.width = static_cast<int>(parse_int(value, key));
    else if (key == "height") config.height = static_cast<int>(parse_int(value, key));
    else if (key == "master_seed") config.master_seed = parse_uint(value, key);
    else if (key == "reevaluate_candidates") {
      if (value == "true" || value == "1") config.reevaluate_candidates = true;
      else if (value == "false" || value == "0") config.reevaluate_candidates = false;
      else throw std::runtime_error("config: bad boolean '" + value + "'");
    } else {
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
    }
  }
  return config;
}

Stage1Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  try {
    return parse_config(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_config(std::ostream& out, const Stage1Config& config) {
  out << "instance=" << config.instance_path << "\n";
  out << "opt_tour=" << config.opt_tour_path << "\n";
  out << "rho=";
  for (std::size_t i = 0; i < config.rho_values.size(); ++i)
    out << (i ? "," : "") << format_double(config.rho_values[i]);
  out << "\n";
  out << "clusters_per_rho=" << config.clusters_per_rho << "\n";
  out << "threads_per_cluster=" << config.threads_per_cluster << "\n";
  out << "top_k=" << config.top_k << "\n";
  out << "repetitions=" << config.repetitions << "\n";
  out << "ranking_repetitions=" << config.ranking_repetitions << "\n";
  out << "n_random=" << config.n_random << "\n";
  out << "disturbed_tours=" << config.disturbed_tours << "\n";
  out << "swaps=" << config.swaps << "\n";
  out << "width=" << config.width << "\n";
  out << "height=" << config.height << "\n";
  out << "master_seed=" << config.master_seed << "\n";
  out << "reevaluate_candidates=" << (config.reevaluate_candidates ? "true" : "false") << "\n";
}

RankedThreads rank_threads(const std::vector<ExecutionThread>& threads,
                           const TspInstance& instance, const DisturbedTourSet& tours,
                           std::int64_t optimum, int repetitions, std::uint64_t seed,
                           int jobs) {
  if (threads.empty()) throw std::runtime_error("cannot rank an empty thread list");
  std::vector<double> scores(threads.size());
  parallel_for(threads.size(), jobs, [&](std::size_t i) {
    scores[i] = score_thread(threads[i], instance, tours, optimum, repetitions,
                             derive_seed(seed, i));
  });
  std::vector<std::size_t> idx(threads.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  RankedThreads ranked;
  ranked.entries.reserve(threads.size());
  for (std::size_t i : idx) ranked.entries.push_back({threads[i], scores[i]});
  return ranked;
}

Stage1Report run_stage1(const Stage1Config& config, const TspInstance& instance,
                        const Tour& optimum_tour, int jobs) {
  config.validate();
  Stage1Report report;
  report.config = config;
  report.optimum = tour_length(instance, optimum_tour);
  report.tours = make_disturbed_tours(optimum_tour, config.disturbed_tours,
                                      config.swaps, config.master_seed);

  std::vector<double> rhos = config.rho_values;
  std::sort(rhos.begin(), rhos.end());
  rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
  const int n_groups = static_cast<int>(rhos.size());
  const int per_group = config.clusters_per_rho;

  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());

  // Collection: one task per (group, cluster).
  const std::uint64_t cluster_stream = derive_seed(config.master_seed, kStreamCluster);
  const std::uint64_t collect_stream = derive_seed(config.master_seed, kStreamCollect);
  std::vector<std::vector<ExecutionThread>> collected(
      static_cast<std::size_t>(n_groups) * per_group);
  parallel_for(collected.size(), jobs, [&](std::size_t task) {
    const int g = static_cast<int>(task) / per_group;
    const int c = static_cast<int>(task) % per_group;
    const std::uint64_t cluster_seed = derive_seed(derive_seed(cluster_stream, g), c);
    Rng cluster_rng(cluster_seed);
    const Cluster cluster = generate_cluster(config.width, config.height, rhos[g],
                                             palette, cluster_rng, cluster_seed);
    if (cluster.occupied_count() == 0) return;  // nothing to walk on
    auto& out = collected[task];
    out.reserve(config.threads_per_cluster);
    const std::uint64_t base = derive_seed(derive_seed(collect_stream, g), c);
    for (int t = 0; t < config.threads_per_cluster; ++t) {
      Rng walk_rng(derive_seed(base, t));
      out.push_back(collect_thread(cluster, walk_rng));
    }
  });

  const std::uint64_t ranking_stream = derive_seed(config.master_seed, kStreamRanking);
  const std::uint64_t eval_stream = derive_seed(config.master_seed, kStreamEval);

  for (int g = 0; g < n_groups; ++g) {
    GroupReport group;
    group.rho = rhos[g];
    for (int c = 0; c < per_group; ++c) {
      const auto& part = collected[static_cast<std::size_t>(g) * per_group + c];
      group.collected.insert(group.collected.end(), part.begin(), part.end());
    }
    if (group.collected.empty()) {
      report.notes.push_back("rho=" + format_double(group.rho) +
                             ": no threads collected, group skipped");
      continue;
    }
    group.ranking = rank_threads(group.collected, instance, report.tours, report.optimum,
                                 config.ranking_repetitions, derive_seed(ranking_stream, g),
                                 jobs);
    group.ranking.rho_group = group.rho;
    const int keep = std::min<int>(config.top_k, static_cast<int>(group.ranking.entries.size()));
    for (int i = 0; i < keep; ++i) group.top.push_back(group.ranking.entries[i].thread);

    std::vector<std::pair<std::string, ExecutionThread>> candidates;
    for (int i = 0; i < keep; ++i)
      candidates.emplace_back("ET" + std::to_string(i + 1), group.top[i]);

    if (keep >= 2) {
      std::vector<std::string> encodings;
      std::vector<std::string> ids;
      for (int i = 0; i < keep; ++i) {
        encodings.push_back(group.top[i].encoding());
        ids.push_back("ET" + std::to_string(i + 1));
      }
      group.alignment = align(encodings, std::move(ids));
      group.aligned = true;
      group.pattern = extract_pattern(group.alignment);
      if (group.pattern.thread.sequence.empty())
        report.notes.push_back("rho=" + format_double(group.rho) +
                               ": alignment has no match columns, cET is empty");
      candidates.emplace_back("cET", group.pattern.thread);
    } else {
      report.notes.push_back("rho=" + format_double(group.rho) +
                             ": fewer than 2 top threads, alignment skipped");
    }

    group.eval = vis_a_vis(candidates, instance, report.tours, report.optimum,
                           config.n_random, config.repetitions, palette,
                           derive_seed(eval_stream, g), jobs,
                           config.reevaluate_candidates);
    group.evaluated = true;
    report.groups.push_back(std::move(group));
  }
  return report;
}

Stage1Report run_stage1(const Stage1Config& config, int jobs) {
  if (config.instance_path.empty()) throw std::runtime_error("config: instance path not set");
  if (config.opt_tour_path.empty()) throw std::runtime_error("config: opt_tour path not set");
  const TspInstance instance = load_tsplib(config.instance_path);
  const Tour optimum_tour = load_tour(config.opt_tour_path, instance.size());
  return run_stage1(config, instance, optimum_tour, jobs);
}

void write_stage1_report(const Stage1Report& report, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  for (const char* sub : {"tours", "threads", "ranking", "alignment", "cet", "eval"})
    fs::create_directories(out_dir / sub);

  for (std::size_t i = 0; i < report.tours.tours.size(); ++i) {
    const auto path = out_dir / "tours" / ("disturbed_" + std::to_string(i) + ".tour");
    save_tour(path.string(), report.tours.tours[i], "disturbed_" + std::to_string(i));
  }

  for (const auto& group : report.groups) {
    const std::string rho = format_double(group.rho);
    save_threads((out_dir / "threads" / (rho + ".txt")).string(), group.collected);

    std::ofstream ranking(out_dir / "ranking" / (rho + ".csv"));
    if (!ranking) throw std::runtime_error("cannot write ranking CSV");
    ranking << "encoding,mean_gap,cluster_seed\n";
    for (const auto& entry : group.ranking.entries) {
      ranking << entry.thread.encoding() << "," << format_double(entry.mean_gap) << ",";
      if (entry.thread.provenance) ranking << entry.thread.provenance->cluster_seed;
      ranking << "\n";
    }

    if (group.aligned) {
      std::ofstream alignment(out_dir / "alignment" / (rho + ".txt"));
      if (!alignment) throw std::runtime_error("cannot write alignment file");
      for (const auto& row : group.alignment.rows) alignment << row << "\n";

      std::ofstream cet(out_dir / "cet" / (rho + ".txt"));
      if (!cet) throw std::runtime_error("cannot write cET file");
      cet << group.pattern.thread.encoding() << "\n";
    }

    if (group.evaluated)
      export_report(group.eval, out_dir / "eval" / (rho + "_raw.csv"),
                    out_dir / "eval" / (rho + "_summary.csv"));
  }

  if (!report.notes.empty()) {
    std::ofstream notes(out_dir / "notes.txt");
    for (const auto& note : report.notes) notes << note << "\n";
  }
}

}  // namespace tileheur
