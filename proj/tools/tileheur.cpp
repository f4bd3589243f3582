// Command-line front end: every line of the analysis pipeline (disturbing
// tours, generating clusters, collecting threads, ranking, aligning,
// building cET, evaluating) is independently runnable, plus the whole
// pipeline as run-stage1. All randomness flows from one master seed through
// the deterministic splitter, so reruns and different --jobs settings
// produce identical outputs.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "tileheur/analysis.hpp"
#include "tileheur/percolation.hpp"
#include "tileheur/util.hpp"
#include "tileheur/version.hpp"
#include "tileheur/wang.hpp"

namespace fs = std::filesystem;
using namespace tileheur;

namespace {

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// --out fallback: $TILEHEUR_OUT/<name> when the flag is omitted.
std::string resolve_out(const std::string& out, const std::string& name) {
  if (!out.empty()) return out;
  if (const char* root = std::getenv("TILEHEUR_OUT"))
    return (fs::path(root) / name).string();
  throw std::runtime_error("--out not given and TILEHEUR_OUT is not set");
}

void write_manifest(const fs::path& dir, const std::string& command,
                    std::uint64_t seed, const std::vector<std::pair<std::string, std::string>>& entries) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.txt");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << "tool=tileheur " << kVersion << "\n";
  out << "command=" << command << "\n";
  out << "seed=" << seed << "\n";
  for (const auto& [k, v] : entries) out << k << "=" << v << "\n";
}

std::vector<Heuristic> palette_from_letters(const std::string& letters) {
  std::vector<Heuristic> palette;
  for (char ch : letters) palette.push_back(kind_of(ch));
  return palette;
}

DisturbedTourSet tours_from_files(const std::vector<std::string>& paths,
                                  const TspInstance& instance) {
  DisturbedTourSet set;
  for (const auto& path : paths) set.tours.push_back(load_tour(path, instance.size()));
  if (set.tours.empty()) throw std::runtime_error("no reference tours given");
  return set;
}

std::vector<std::pair<std::string, ExecutionThread>> load_candidates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open candidates file: " + path);
  std::vector<std::pair<std::string, ExecutionThread>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
    std::istringstream ls{line};
    std::string first, second;
    if (!(ls >> first)) continue;
    if (ls >> second) {
      out.emplace_back(first, decode_thread(second));
    } else {
      out.emplace_back("ET" + std::to_string(out.size() + 1), decode_thread(first));
    }
  }
  if (out.empty()) throw std::runtime_error("candidates file is empty: " + path);
  return out;
}

int cmd_disturb(const std::string& instance_path, const std::string& opt_tour_path,
                int swaps, int count, std::uint64_t seed, const std::string& out_dir) {
  const TspInstance instance = load_tsplib(instance_path);
  const Tour optimum = load_tour(opt_tour_path, instance.size());
  write_manifest(out_dir, "disturb", seed,
                 {{"instance", instance_path},
                  {"opt_tour", opt_tour_path},
                  {"swaps", std::to_string(swaps)},
                  {"count", std::to_string(count)}});
  const auto set = make_disturbed_tours(optimum, count, swaps, seed);
  for (std::size_t i = 0; i < set.tours.size(); ++i) {
    const auto path = fs::path(out_dir) / ("disturbed_" + std::to_string(i) + ".tour");
    save_tour(path.string(), set.tours[i], "disturbed_" + std::to_string(i));
    std::cout << path.string() << " length=" << tour_length(instance, set.tours[i])
              << "\n";
  }
  return 0;
}

int cmd_clusters(const std::vector<double>& rhos, int count, int width, int height,
                 const std::string& palette_letters, std::uint64_t seed,
                 const std::string& out_dir) {
  const auto palette = palette_from_letters(palette_letters);
  write_manifest(out_dir, "clusters", seed,
                 {{"count", std::to_string(count)},
                  {"width", std::to_string(width)},
                  {"height", std::to_string(height)},
                  {"palette", palette_letters}});
  const std::uint64_t stream = derive_seed(seed, kStreamCluster);
  for (std::size_t g = 0; g < rhos.size(); ++g) {
    for (int c = 0; c < count; ++c) {
      const std::uint64_t cluster_seed = derive_seed(derive_seed(stream, g), c);
      Rng rng(cluster_seed);
      const Cluster cluster =
          generate_cluster(width, height, rhos[g], palette, rng, cluster_seed);
      const auto path = fs::path(out_dir) / ("cluster_" + format_double(rhos[g]) + "_" +
                                             std::to_string(c) + ".txt");
      save_cluster(path.string(), cluster);
      std::cout << path.string() << " occupied=" << cluster.occupied_count() << "\n";
    }
  }
  return 0;
}

int cmd_collect(const std::vector<std::string>& cluster_paths, int count,
                std::uint64_t seed, const std::string& out_path) {
  std::vector<ExecutionThread> threads;
  const std::uint64_t stream = derive_seed(seed, kStreamCollect);
  for (std::size_t f = 0; f < cluster_paths.size(); ++f) {
    const Cluster cluster = load_cluster(cluster_paths[f]);
    const std::uint64_t base = derive_seed(stream, f);
    for (int t = 0; t < count; ++t) {
      Rng rng(derive_seed(base, t));
      threads.push_back(collect_thread(cluster, rng));
    }
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "# seed=" << seed << "\n";
  write_threads(out, threads);
  std::cout << out_path << " threads=" << threads.size() << "\n";
  return 0;
}

int cmd_rank(const std::string& instance_path, const std::string& opt_tour_path,
             const std::string& threads_path, const std::vector<std::string>& tour_paths,
             int reps, std::uint64_t seed, int jobs, const std::string& out_path) {
  const TspInstance instance = load_tsplib(instance_path);
  const Tour optimum_tour = load_tour(opt_tour_path, instance.size());
  const std::int64_t optimum = tour_length(instance, optimum_tour);
  const auto threads = load_threads(threads_path);
  const auto tours = tours_from_files(tour_paths, instance);
  const auto ranked = rank_threads(threads, instance, tours, optimum, reps,
                                   derive_seed(seed, kStreamRanking), jobs);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "# seed=" << seed << "\n";
  out << "encoding,mean_gap,cluster_seed\n";
  for (const auto& entry : ranked.entries) {
    out << entry.thread.encoding() << "," << format_double(entry.mean_gap) << ",";
    if (entry.thread.provenance) out << entry.thread.provenance->cluster_seed;
    out << "\n";
  }
  std::cout << out_path << " ranked=" << ranked.entries.size() << "\n";
  return 0;
}

int cmd_align(const std::string& threads_path, int top, const std::string& out_path) {
  const auto threads = load_threads(threads_path);
  std::vector<std::string> encodings;
  for (const auto& t : threads) {
    encodings.push_back(t.encoding());
    if (top > 0 && static_cast<int>(encodings.size()) == top) break;
  }
  const Alignment alignment = align(encodings);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  for (const auto& row : alignment.rows) out << row << "\n";
  std::cout << out_path << " rows=" << alignment.rows.size()
            << " columns=" << alignment.columns() << "\n";
  return 0;
}

int cmd_cet(const std::string& alignment_path, const std::string& out_path) {
  std::ifstream in(alignment_path);
  if (!in) throw std::runtime_error("cannot open alignment file: " + alignment_path);
  Alignment alignment;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t(trim(line));
    if (t.empty() || t[0] == '#') continue;
    alignment.rows.push_back(t);
    alignment.row_ids.push_back("ET" + std::to_string(alignment.rows.size()));
  }
  if (alignment.rows.empty()) throw std::runtime_error("alignment file has no rows");
  const PatternThread pattern = extract_pattern(alignment);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << pattern.thread.encoding() << "\n";
  std::cout << out_path << " cet=" << pattern.thread.encoding()
            << " match_columns=" << pattern.match_columns.size() << "\n";
  return 0;
}

int cmd_eval(const std::string& instance_path, const std::string& opt_tour_path,
             const std::string& candidates_path, const std::vector<std::string>& tour_paths,
             int n_random, int reps, std::uint64_t seed, int jobs, bool per_tour,
             bool fixed_candidate_score, const std::string& out_dir) {
  const TspInstance instance = load_tsplib(instance_path);
  const Tour optimum_tour = load_tour(opt_tour_path, instance.size());
  const std::int64_t optimum = tour_length(instance, optimum_tour);
  const auto candidates = load_candidates(candidates_path);
  const auto tours = tours_from_files(tour_paths, instance);
  const std::vector<Heuristic> palette(kAllHeuristics.begin(), kAllHeuristics.end());
  write_manifest(out_dir, "eval", seed,
                 {{"instance", instance_path},
                  {"candidates", candidates_path},
                  {"n_random", std::to_string(n_random)},
                  {"repetitions", std::to_string(reps)}});
  const std::uint64_t stream = derive_seed(seed, kStreamEval);
  const auto report = vis_a_vis(candidates, instance, tours, optimum, n_random, reps,
                                palette, stream, jobs, !fixed_candidate_score);
  export_report(report, fs::path(out_dir) / "raw.csv", fs::path(out_dir) / "summary.csv");
  if (per_tour) {
    for (std::size_t t = 0; t < tours.tours.size(); ++t) {
      DisturbedTourSet single;
      single.tours.push_back(tours.tours[t]);
      const auto tr = vis_a_vis(candidates, instance, single, optimum, n_random, reps,
                                palette, derive_seed(stream, 1000 + t), jobs,
                                !fixed_candidate_score);
      export_report(tr, fs::path(out_dir) / ("tour" + std::to_string(t) + "_raw.csv"),
                    fs::path(out_dir) / ("tour" + std::to_string(t) + "_summary.csv"));
    }
  }
  std::cout << out_dir << " groups=" << report.groups.size() << "\n";
  return 0;
}

int cmd_wang(const std::string& tileset_path, int width, int height, int steps,
             std::uint64_t seed, const std::string& out_path) {
  const TileSet set = load_tileset(tileset_path);
  Rng rng(derive_seed(seed, kStreamWang));
  SimState state = init_sim(set.tiles, set.glue, width, height, set.tau, rng);
  state.run(steps, rng);
  Cluster cluster = extract_cluster(state);
  cluster.seed = seed;
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  write_cluster(out, cluster);
  std::cout << out_path << " frozen=" << state.frozen_count() << "/" << state.tile_count()
            << " steps=" << state.step_count() << "\n";
  return 0;
}

int cmd_validate(const std::string& instance_path, const std::string& tour_path,
                 const std::string& opt_tour_path, long long optimum_value) {
  const TspInstance instance = load_tsplib(instance_path);
  Tour tour;
  try {
    tour = load_tour(tour_path, instance.size());
  } catch (const std::exception& e) {
    std::cout << "INVALID " << e.what() << "\n";
    return 1;
  }
  const std::int64_t length = tour_length(instance, tour);
  std::cout << "VALID length=" << length;
  std::int64_t optimum = optimum_value;
  if (!opt_tour_path.empty())
    optimum = tour_length(instance, load_tour(opt_tour_path, instance.size()));
  if (optimum > 0) std::cout << " gap=" << gap_to_optimum(length, optimum);
  std::cout << "\n";
  return 0;
}

int cmd_run_stage1(const Stage1Config& config, int jobs, const std::string& out_dir) {
  config.validate();
  const fs::path out(out_dir);
  fs::create_directories(out / "report");
  {
    std::ofstream manifest(out / "manifest.txt");
    if (!manifest) throw std::runtime_error("cannot write manifest in " + out_dir);
    manifest << "tool=tileheur " << kVersion << "\n";
    manifest << "command=run-stage1\n";
    manifest << "report_dir=report\n";
    manifest << "outputs=tours,threads,ranking,alignment,cet,eval\n";
    write_config(manifest, config);
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Stage1Report report = run_stage1(config, jobs);
  const auto t1 = std::chrono::steady_clock::now();
  write_stage1_report(report, out / "report");
  const auto t2 = std::chrono::steady_clock::now();
  {
    // wall-clock timings are the one non-reproducible output, kept out of
    // the report payload
    std::ofstream timings(out / "timings.txt");
    timings << "analysis_ms="
            << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
            << "\n";
    timings << "write_ms="
            << std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count()
            << "\n";
  }
  std::cout << out_dir << " groups=" << report.groups.size() << " optimum="
            << report.optimum << "\n";
  for (const auto& note : report.notes) std::cout << "note: " << note << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-assembly hyper-heuristic toolkit for the symmetric TSP"};
  app.set_version_flag("--version", std::string("tileheur ") + kVersion);
  app.require_subcommand(1);

  std::string instance_path, opt_tour_path, out, threads_path, alignment_path;
  std::string candidates_path, tileset_path, tour_path, config_path;
  std::string palette_letters = "CDEFATGH";
  std::vector<std::string> cluster_paths, tour_paths;
  std::vector<double> rhos;
  int swaps = 200, count = 10, width = 20, height = 20, reps = 10, top = 0;
  int n_random = 300, steps = 1000, jobs = 1;
  long long optimum_value = 0;
  std::uint64_t seed = 0;

  auto add_seed = [&seed](CLI::App* cmd) {
    return cmd->add_option("--seed", seed, "master seed (default: drawn from entropy)");
  };
  auto add_jobs = [&jobs](CLI::App* cmd) {
    cmd->add_option("--jobs", jobs, "worker count; outputs do not depend on it")
        ->default_val(1);
  };

  auto* disturb = app.add_subcommand("disturb", "write disturbed copies of the optimum tour");
  disturb->add_option("--instance", instance_path)->required();
  disturb->add_option("--opt-tour", opt_tour_path)->required();
  disturb->add_option("--swaps", swaps)->default_val(200);
  disturb->add_option("--count", count)->default_val(10);
  auto* disturb_seed = add_seed(disturb);
  disturb->add_option("--out", out, "output directory");

  auto* clusters = app.add_subcommand("clusters", "generate percolation clusters");
  clusters->add_option("--rho", rhos, "occupation probabilities")->required();
  clusters->add_option("--clusters", count, "clusters per rho")->default_val(10);
  clusters->add_option("--width", width)->default_val(20);
  clusters->add_option("--height", height)->default_val(20);
  clusters->add_option("--palette", palette_letters, "heuristic letters to embed");
  auto* clusters_seed = add_seed(clusters);
  clusters->add_option("--out", out, "output directory");

  auto* collect = app.add_subcommand("collect", "collect execution threads by random walk");
  collect->add_option("--cluster", cluster_paths, "cluster file (repeatable)")->required();
  collect->add_option("--threads", count, "threads per cluster")->default_val(100);
  auto* collect_seed = add_seed(collect);
  collect->add_option("--out", out, "output threads file");

  auto* rank = app.add_subcommand("rank", "score and sort execution threads");
  rank->add_option("--instance", instance_path)->required();
  rank->add_option("--opt-tour", opt_tour_path)->required();
  rank->add_option("--threads-file", threads_path)->required();
  rank->add_option("--tour", tour_paths, "reference tour file (repeatable)")->required();
  rank->add_option("--reps", reps, "scoring repetitions")->default_val(1);
  auto* rank_seed = add_seed(rank);
  add_jobs(rank);
  rank->add_option("--out", out, "output CSV");

  auto* align_cmd = app.add_subcommand("align", "multiple sequence alignment of encodings");
  align_cmd->add_option("--threads-file", threads_path)->required();
  align_cmd->add_option("--top", top, "align only the first K threads")->default_val(0);
  align_cmd->add_option("--out", out, "output alignment file");

  auto* cet = app.add_subcommand("cet", "build the pattern-based thread from an alignment");
  cet->add_option("--alignment", alignment_path)->required();
  cet->add_option("--out", out, "output cET file");

  auto* eval_cmd = app.add_subcommand("eval", "vis-a-vis comparison against random threads");
  eval_cmd->add_option("--instance", instance_path)->required();
  eval_cmd->add_option("--opt-tour", opt_tour_path)->required();
  eval_cmd->add_option("--candidates", candidates_path)->required();
  eval_cmd->add_option("--tour", tour_paths, "reference tour file (repeatable)")->required();
  eval_cmd->add_option("--n-random", n_random)->default_val(300);
  eval_cmd->add_option("--reps", reps)->default_val(10);
  bool per_tour = false, fixed_candidate = false;
  eval_cmd->add_flag("--per-tour", per_tour, "also report each reference tour separately");
  eval_cmd->add_flag("--fixed-candidate-score", fixed_candidate,
                     "score each candidate once instead of per round");
  auto* eval_seed = add_seed(eval_cmd);
  add_jobs(eval_cmd);
  eval_cmd->add_option("--out", out, "output directory");

  auto* wang = app.add_subcommand("wang", "kinetic Wang-tile simulation to a cluster");
  wang->add_option("--tileset", tileset_path)->required();
  wang->add_option("--width", width)->default_val(20);
  wang->add_option("--height", height)->default_val(20);
  wang->add_option("--steps", steps)->default_val(1000);
  auto* wang_seed = add_seed(wang);
  wang->add_option("--out", out, "output cluster file");

  auto* validate = app.add_subcommand("validate", "check a tour file against an instance");
  validate->add_option("--instance", instance_path)->required();
  validate->add_option("--tour", tour_path)->required();
  validate->add_option("--opt-tour", opt_tour_path);
  validate->add_option("--optimum", optimum_value);

  auto* stage1 = app.add_subcommand("run-stage1", "full pipeline: collect, rank, align, evaluate");
  stage1->add_option("--config", config_path, "key=value config file");
  stage1->add_option("--instance", instance_path);
  stage1->add_option("--opt-tour", opt_tour_path);
  stage1->add_option("--rho", rhos);
  int cfg_clusters = 0, cfg_threads = 0, cfg_top_k = 0, cfg_n_random = 0, cfg_reps = 0;
  int cfg_count = 0, cfg_swaps = -1;
  stage1->add_option("--clusters", cfg_clusters, "clusters per rho");
  stage1->add_option("--threads", cfg_threads, "threads per cluster");
  stage1->add_option("--top-k", cfg_top_k);
  stage1->add_option("--n-random", cfg_n_random);
  stage1->add_option("--reps", cfg_reps, "evaluation repetitions");
  stage1->add_option("--count", cfg_count, "disturbed tour count");
  stage1->add_option("--swaps", cfg_swaps);
  auto* stage1_seed = add_seed(stage1);
  add_jobs(stage1);
  stage1->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*disturb) {
      if (!*disturb_seed) seed = entropy_seed();
      return cmd_disturb(instance_path, opt_tour_path, swaps, count, seed,
                         resolve_out(out, "disturbed"));
    }
    if (*clusters) {
      if (!*clusters_seed) seed = entropy_seed();
      return cmd_clusters(rhos, count, width, height, palette_letters, seed,
                          resolve_out(out, "clusters"));
    }
    if (*collect) {
      if (!*collect_seed) seed = entropy_seed();
      return cmd_collect(cluster_paths, count, seed, resolve_out(out, "threads.txt"));
    }
    if (*rank) {
      if (!*rank_seed) seed = entropy_seed();
      return cmd_rank(instance_path, opt_tour_path, threads_path, tour_paths, reps, seed,
                      jobs, resolve_out(out, "ranking.csv"));
    }
    if (*align_cmd) return cmd_align(threads_path, top, resolve_out(out, "alignment.txt"));
    if (*cet) return cmd_cet(alignment_path, resolve_out(out, "cet.txt"));
    if (*eval_cmd) {
      if (!*eval_seed) seed = entropy_seed();
      return cmd_eval(instance_path, opt_tour_path, candidates_path, tour_paths, n_random,
                      reps, seed, jobs, per_tour, fixed_candidate,
                      resolve_out(out, "eval"));
    }
    if (*wang) {
      if (!*wang_seed) seed = entropy_seed();
      return cmd_wang(tileset_path, width, height, steps, seed,
                      resolve_out(out, "wang_cluster.txt"));
    }
    if (*validate)
      return cmd_validate(instance_path, tour_path, opt_tour_path, optimum_value);
    if (*stage1) {
      Stage1Config config;
      if (!config_path.empty()) config = load_config(config_path);
      if (!instance_path.empty()) config.instance_path = instance_path;
      if (!opt_tour_path.empty()) config.opt_tour_path = opt_tour_path;
      if (!rhos.empty()) config.rho_values = rhos;
      if (cfg_clusters > 0) config.clusters_per_rho = cfg_clusters;
      if (cfg_threads > 0) config.threads_per_cluster = cfg_threads;
      if (cfg_top_k > 0) config.top_k = cfg_top_k;
      if (cfg_n_random > 0) config.n_random = cfg_n_random;
      if (cfg_reps > 0) config.repetitions = cfg_reps;
      if (cfg_count > 0) config.disturbed_tours = cfg_count;
      if (cfg_swaps >= 0) config.swaps = cfg_swaps;
      if (*stage1_seed) config.master_seed = seed;
      else if (config_path.empty()) config.master_seed = entropy_seed();
      return cmd_run_stage1(config, jobs, resolve_out(out, "stage1"));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
