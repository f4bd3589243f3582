#include "tileheur/threads.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "tileheur/util.hpp"

namespace tileheur {

std::string ExecutionThread::encoding() const {
  std::string out;
  out.reserve(sequence.size());
  for (Heuristic h : sequence) out.push_back(letter_of(h));
  return out;
}

bool ExecutionThread::deterministic() const {
  for (Heuristic h : sequence)
    if (is_stochastic(h)) return false;
  return true;
}

std::string encode_thread(const ExecutionThread& thread) { return thread.encoding(); }

ExecutionThread decode_thread(const std::string& encoding) {
  ExecutionThread thread;
  thread.sequence.reserve(encoding.size());
  for (char ch : encoding) thread.sequence.push_back(kind_of(ch));
  return thread;
}

ExecutionThread collect_thread(const Cluster& cluster, Rng& rng) {
  const auto sites = occupied_sites(cluster);
  if (sites.empty()) throw std::runtime_error("cannot collect a thread from an empty cluster");

  const auto& start = sites[rng.index(static_cast<int>(sites.size()))];
  ExecutionThread thread;
  WalkProvenance prov;
  prov.cluster_seed = cluster.seed;
  prov.rho = cluster.rho;
  prov.start_row = start.row;
  prov.start_col = start.col;

  int row = start.row, col = start.col;
  thread.sequence.push_back(cluster.at(row, col));
  prov.path.emplace_back(row, col);

  static constexpr std::array<std::pair<int, int>, 4> kSteps = {
      {{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
  for (;;) {
    const auto [dr, dc] = kSteps[rng.index(4)];
    row += dr;
    col += dc;
    if (row < 0 || row >= cluster.height || col < 0 || col >= cluster.width) break;
    if (!cluster.occupied(row, col)) break;
    thread.sequence.push_back(cluster.at(row, col));
    prov.path.emplace_back(row, col);
  }
  thread.provenance = std::move(prov);
  return thread;
}

ThreadRunResult apply_thread(const ExecutionThread& thread, const TspInstance& instance,
                             const Tour& tour, std::int64_t optimum, Rng& rng) {
  ThreadRunResult result;
  result.final_tour = tour;
  result.per_step_lengths.reserve(thread.sequence.size());
  std::int64_t length = tour_length(instance, tour);
  for (Heuristic kind : thread.sequence) {
    MoveOutcome outcome = apply_heuristic(kind, instance, result.final_tour, rng);
    result.final_tour = std::move(outcome.tour);
    length += outcome.delta;
    result.per_step_lengths.push_back(length);
  }
  result.final_length = length;
  result.gap = gap_to_optimum(length, optimum);
  return result;
}

void write_threads(std::ostream& out, const std::vector<ExecutionThread>& threads) {
  for (const auto& thread : threads) {
    out << thread.encoding();
    if (thread.provenance) {
      const auto& p = *thread.provenance;
      out << " # rho=" << format_double(p.rho) << " cluster_seed=" << p.cluster_seed
          << " start=" << p.start_row << "," << p.start_col;
    }
    out << "\n";
  }
}

std::vector<ExecutionThread> read_threads(std::istream& in) {
  std::vector<ExecutionThread> threads;
  std::string line;
  while (std::getline(in, line)) {
    std::string body(line);
    std::optional<std::string> comment;
    if (auto pos = line.find('#'); pos != std::string::npos) {
      body = line.substr(0, pos);
      comment = line.substr(pos + 1);
    }
    const std::string encoding(trim(body));
    if (encoding.empty()) continue;  // blank or comment-only line
    ExecutionThread thread = decode_thread(encoding);
    if (comment) {
      WalkProvenance prov;
      bool any = false;
      for (const auto& token : split(trim(*comment), ' ')) {
        if (token.empty()) continue;
        auto kv = split(token, '=');
        if (kv.size() != 2) continue;
        if (kv[0] == "rho") {
          prov.rho = parse_double(kv[1], "rho");
          any = true;
        } else if (kv[0] == "cluster_seed") {
          prov.cluster_seed = parse_uint(kv[1], "cluster_seed");
          any = true;
        } else if (kv[0] == "start") {
          auto rc = split(kv[1], ',');
          if (rc.size() != 2) throw std::runtime_error("malformed start field: '" + kv[1] + "'");
          prov.start_row = static_cast<int>(parse_int(rc[0], "start row"));
          prov.start_col = static_cast<int>(parse_int(rc[1], "start col"));
          any = true;
        }
      }
      if (any) thread.provenance = std::move(prov);
    }
    threads.push_back(std::move(thread));
  }
  return threads;
}

void save_threads(const std::string& path, const std::vector<ExecutionThread>& threads) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write threads file: " + path);
  write_threads(out, threads);
}

std::vector<ExecutionThread> load_threads(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open threads file: " + path);
  try {
    return read_threads(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace tileheur
