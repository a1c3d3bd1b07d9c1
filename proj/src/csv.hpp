#pragma once

#include <string>
#include <vector>

#include "experiment.hpp"

namespace tsrlab {

// Shortest decimal form that parses back to exactly the same double, so that
// emitted files are byte-stable and round-trip losslessly.
std::string format_double(double value);

// Header: phase,episode,return,transitions,decisions,tv — one row per
// training episode.
std::string per_seed_csv(const std::vector<EpisodeRecord>& records);

// Header: phase,episode,metric,mean,stderr — four rows per episode, metric
// in the order return, transitions, decisions, tv.
std::string aggregate_csv(const AggregateSeries& agg);

struct AggregateCsvRow {
  int phase = 0;
  int episode = 0;
  std::string metric;
  double mean = 0.0;
  double stderr_ = 0.0;

  bool operator==(const AggregateCsvRow&) const = default;
};

// Strict parse of the aggregate schema; rejects wrong headers, field counts,
// unknown metric names, and non-numeric cells.
std::vector<AggregateCsvRow> parse_aggregate_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tsrlab
