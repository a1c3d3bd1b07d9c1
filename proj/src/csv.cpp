#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "error.hpp"

namespace tsrlab {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::Internal, "failed to format a double");
  }
  return std::string(buf, ptr);
}

std::string per_seed_csv(const std::vector<EpisodeRecord>& records) {
  std::string out = "phase,episode,return,transitions,decisions,tv\n";
  for (const auto& rec : records) {
    out += std::to_string(rec.phase);
    out += ',';
    out += std::to_string(rec.episode);
    out += ',';
    out += format_double(rec.eval_return);
    out += ',';
    out += std::to_string(rec.eval_transitions);
    out += ',';
    out += std::to_string(rec.eval_decisions);
    out += ',';
    out += format_double(rec.tv);
    out += '\n';
  }
  return out;
}

std::string aggregate_csv(const AggregateSeries& agg) {
  std::string out = "phase,episode,metric,mean,stderr\n";
  auto row = [&out](int phase, int episode, const char* metric, double mean,
                    double se) {
    out += std::to_string(phase);
    out += ',';
    out += std::to_string(episode);
    out += ',';
    out += metric;
    out += ',';
    out += format_double(mean);
    out += ',';
    out += format_double(se);
    out += '\n';
  };
  for (size_t i = 0; i < agg.size(); ++i) {
    row(agg.phase[i], agg.episode[i], "return", agg.return_mean[i],
        agg.return_stderr[i]);
    row(agg.phase[i], agg.episode[i], "transitions", agg.transitions_mean[i],
        agg.transitions_stderr[i]);
    row(agg.phase[i], agg.episode[i], "decisions", agg.decisions_mean[i],
        agg.decisions_stderr[i]);
    row(agg.phase[i], agg.episode[i], "tv", agg.tv_mean[i], agg.tv_stderr[i]);
  }
  return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

int parse_int(const std::string& field, int line_no) {
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line_no) + ": expected an integer, got '" +
                    field + "'");
  }
  return value;
}

double parse_num(const std::string& field, int line_no) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ConfigInvalid,
                "line " + std::to_string(line_no) + ": expected a number, got '" +
                    field + "'");
  }
  return value;
}

bool known_metric(const std::string& name) {
  return name == "return" || name == "transitions" || name == "decisions" ||
         name == "tv";
}

}  // namespace

std::vector<AggregateCsvRow> parse_aggregate_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "phase,episode,metric,mean,stderr") {
    throw Error(ErrorCode::ConfigInvalid,
                "expected header 'phase,episode,metric,mean,stderr'");
  }
  std::vector<AggregateCsvRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 5) {
      throw Error(ErrorCode::ConfigInvalid,
                  "line " + std::to_string(line_no) + ": expected 5 fields, got " +
                      std::to_string(fields.size()));
    }
    AggregateCsvRow row;
    row.phase = parse_int(fields[0], line_no);
    row.episode = parse_int(fields[1], line_no);
    row.metric = fields[2];
    if (!known_metric(row.metric)) {
      throw Error(ErrorCode::ConfigInvalid,
                  "line " + std::to_string(line_no) + ": unknown metric '" +
                      row.metric + "'");
    }
    row.mean = parse_num(fields[3], line_no);
    row.stderr_ = parse_num(fields[4], line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "no data rows");
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::Io, "failed while reading '" + path + "'");
  }
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error(ErrorCode::Io, "failed while writing '" + path + "'");
  }
}

}  // namespace tsrlab
