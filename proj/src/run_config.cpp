#include "run_config.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

#include "csv.hpp"
#include "error.hpp"

namespace tsrlab {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) {
    return "";
  }
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t comma = s.find(',', start);
    std::string part = trim(comma == std::string::npos
                                ? s.substr(start)
                                : s.substr(start, comma - start));
    parts.push_back(part);
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return parts;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T parsed{};
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::ConfigInvalid,
                key + ": expected a number, got '" + value + "'");
  }
  return parsed;
}

void assign_key(RunConfig& cfg, const std::string& key,
                const std::string& value) {
  if (value.empty()) {
    throw Error(ErrorCode::ConfigInvalid, key + ": empty value");
  }
  if (key == "layout") {
    cfg.layout_path = value;
  } else if (key == "agent") {
    cfg.agents.clear();
    for (const std::string& name : split_list(value)) {
      AgentKind kind = agent_kind_from_name(name);
      if (std::find(cfg.agents.begin(), cfg.agents.end(), kind) !=
          cfg.agents.end()) {
        throw Error(ErrorCode::ConfigInvalid,
                    "agent: '" + name + "' listed twice");
      }
      cfg.agents.push_back(kind);
    }
  } else if (key == "seeds") {
    cfg.seeds.clear();
    if (value.find(',') == std::string::npos) {
      auto count = parse_number<std::uint64_t>(key, value);
      if (count < 1) {
        throw Error(ErrorCode::ConfigInvalid, "seeds: count must be positive");
      }
      for (std::uint64_t s = 0; s < count; ++s) {
        cfg.seeds.push_back(s);
      }
    } else {
      for (const std::string& part : split_list(value)) {
        cfg.seeds.push_back(parse_number<std::uint64_t>(key, part));
      }
      std::set<std::uint64_t> unique(cfg.seeds.begin(), cfg.seeds.end());
      if (unique.size() != cfg.seeds.size()) {
        throw Error(ErrorCode::ConfigInvalid, "seeds: duplicate seed in list");
      }
    }
  } else if (key == "episodes_per_phase") {
    cfg.params.episodes_per_phase = parse_number<int>(key, value);
  } else if (key == "alpha") {
    cfg.params.agent.alpha = parse_number<double>(key, value);
  } else if (key == "alpha_r") {
    cfg.params.agent.alpha_r = parse_number<double>(key, value);
  } else if (key == "gamma") {
    cfg.params.agent.gamma = parse_number<double>(key, value);
  } else if (key == "epsilon") {
    cfg.params.agent.epsilon = parse_number<double>(key, value);
  } else if (key == "j_max") {
    cfg.params.agent.j_max = parse_number<int>(key, value);
  } else if (key == "step_cap") {
    cfg.params.step_cap = parse_number<int>(key, value);
  } else if (key == "eval_cadence") {
    cfg.params.eval_cadence = parse_number<int>(key, value);
  } else if (key == "out_dir") {
    cfg.out_dir = value;
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "'");
  }
}

void assign_line(RunConfig& cfg, const std::string& raw, int line_no) {
  std::string line = raw;
  if (size_t hash = line.find('#'); hash != std::string::npos) {
    line.resize(hash);
  }
  line = trim(line);
  if (line.empty()) {
    return;
  }
  size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line_no) + ": expected key=value");
  }
  std::string key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  if (key.empty()) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line_no) + ": empty key");
  }
  assign_key(cfg, key, value);
}

}  // namespace

void RunConfig::validate() const {
  if (layout_path.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "layout is required");
  }
  if (agents.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "agent is required");
  }
  if (seeds.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "seeds must not be empty");
  }
  if (out_dir.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "out_dir must not be empty");
  }
  params.validate();
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  for (std::uint64_t s = 0; s < 50; ++s) {
    cfg.seeds.push_back(s);
  }
  int line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t nl = text.find('\n', start);
    std::string line = text.substr(
        start, nl == std::string::npos ? std::string::npos : nl - start);
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    assign_line(cfg, line, ++line_no);
    if (nl == std::string::npos) {
      break;
    }
    start = nl + 1;
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides) {
  RunConfig cfg = parse_run_config(read_file(path));
  for (const std::string& ov : overrides) {
    size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigInvalid,
                  "override '" + ov + "': expected key=value");
    }
    assign_key(cfg, trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

namespace {

int worker_count(size_t jobs) {
  int workers = 0;
  if (const char* env = std::getenv("TSRLAB_SEED_WORKERS")) {
    std::string value(env);
    auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), workers);
    if (ec != std::errc() || ptr != value.data() + value.size() ||
        workers < 1) {
      throw Error(ErrorCode::ConfigInvalid,
                  "TSRLAB_SEED_WORKERS must be a positive integer, got '" +
                      value + "'");
    }
  } else {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) {
      workers = 1;
    }
  }
  return std::min<int>(workers, static_cast<int>(jobs));
}

}  // namespace

RunArtifacts execute_run(const RunConfig& cfg) {
  cfg.validate();
  const GridLayout layout = GridLayout::load(cfg.layout_path);

  struct Job {
    size_t agent_idx;
    size_t seed_idx;
  };
  std::vector<Job> jobs;
  for (size_t a = 0; a < cfg.agents.size(); ++a) {
    for (size_t s = 0; s < cfg.seeds.size(); ++s) {
      jobs.push_back({a, s});
    }
  }
  std::vector<std::vector<std::vector<EpisodeRecord>>> results(
      cfg.agents.size(),
      std::vector<std::vector<EpisodeRecord>>(cfg.seeds.size()));

  std::atomic<size_t> next_job{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      size_t i = next_job.fetch_add(1);
      if (i >= jobs.size()) {
        return;
      }
      try {
        const Job& job = jobs[i];
        RunOutput out = run_revaluation(layout, cfg.agents[job.agent_idx],
                                        cfg.params, cfg.seeds[job.seed_idx]);
        results[job.agent_idx][job.seed_idx] = std::move(out.records);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const int workers = worker_count(jobs.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  std::filesystem::create_directories(cfg.out_dir);
  RunArtifacts artifacts;
  for (size_t a = 0; a < cfg.agents.size(); ++a) {
    const std::string agent_name = agent_kind_name(cfg.agents[a]);
    for (size_t s = 0; s < cfg.seeds.size(); ++s) {
      std::filesystem::path path =
          std::filesystem::path(cfg.out_dir) /
          (agent_name + "_seed" + std::to_string(cfg.seeds[s]) + ".csv");
      write_file(path.string(), per_seed_csv(results[a][s]));
      artifacts.files.push_back(path.string());
    }
    std::filesystem::path path = std::filesystem::path(cfg.out_dir) /
                                 (agent_name + "_aggregate.csv");
    write_file(path.string(), aggregate_csv(aggregate(results[a])));
    artifacts.files.push_back(path.string());
  }
  return artifacts;
}

}  // namespace tsrlab
