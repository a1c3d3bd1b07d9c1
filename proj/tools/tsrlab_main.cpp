#include <algorithm>
#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tsrlab/tsrlab.h"

namespace {

int report(tsr_status status, const char* errbuf) {
  if (status == TSR_OK) {
    return 0;
  }
  std::fprintf(stderr, "error: %s (%s)\n",
               errbuf[0] != '\0' ? errbuf : "unspecified",
               tsr_status_name(status));
  return static_cast<int>(status);
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return static_cast<int>(TSR_ERR_INVALID_ARGUMENT);
}

bool parse_grid_spec(const std::string& spec, int* width, int* height) {
  size_t x = spec.find('x');
  if (x == std::string::npos) {
    return false;
  }
  try {
    size_t used = 0;
    *width = std::stoi(spec.substr(0, x), &used);
    if (used != x) {
      return false;
    }
    std::string rest = spec.substr(x + 1);
    *height = std::stoi(rest, &used);
    return used == rest.size();
  } catch (...) {
    return false;
  }
}

bool parse_cell(const std::string& spec, int* row, int* col) {
  size_t comma = spec.find(',');
  if (comma == std::string::npos) {
    return false;
  }
  try {
    size_t used = 0;
    *row = std::stoi(spec.substr(0, comma), &used);
    if (used != comma) {
      return false;
    }
    std::string rest = spec.substr(comma + 1);
    *col = std::stoi(rest, &used);
    return used == rest.size();
  } catch (...) {
    return false;
  }
}

int parse_action(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  const char* names[] = {"north", "east", "south", "west"};
  for (int i = 0; i < 4; ++i) {
    if (name == names[i]) {
      return i;
    }
  }
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Tabular gridworld agents with temporally extended actions: train and "
      "compare learning curves, compute closed-form occupancy fields, and "
      "render plots."};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand(
      "run", "Train agents per a config file and write CSV learning curves");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--set", overrides,
                  "override a config key (key=value; repeatable)");

  std::string layout_path;
  std::string grid_spec = "5x5";
  double gamma = 0.99;
  int repeat = 1;
  std::string action_arg = "east";
  std::string target_spec;
  std::string out_prefix = "sr_field";
  CLI::App* analytic = app.add_subcommand(
      "analytic", "Write a closed-form occupancy field as CSV + SVG heatmap");
  analytic->add_option("--layout", layout_path, "ASCII map file");
  analytic->add_option("--grid", grid_spec,
                       "open grid WxH (used without --layout)");
  analytic->add_option("--gamma", gamma, "discount factor");
  analytic->add_option("--j", repeat, "action repeat count (1 = plain field)");
  analytic->add_option("--action", action_arg,
                       "north|east|south|west (used when --j >= 2)");
  analytic->add_option("--target", target_spec,
                       "target cell as row,col (default: grid center)");
  analytic->add_option("--out", out_prefix, "output path prefix");

  std::vector<std::string> csv_paths;
  std::string plot_out = "plots";
  CLI::App* plot = app.add_subcommand(
      "plot", "Render learning-curve SVGs from aggregate CSVs");
  plot->add_option("csvs", csv_paths, "aggregate CSV files")->required();
  plot->add_option("--out", plot_out, "output directory");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand(
      "validate-layout", "Parse an ASCII map and check reachability");
  validate->add_option("path", validate_path, "ASCII map file")->required();

  CLI11_PARSE(app, argc, argv);

  char errbuf[512] = "";

  if (run->parsed()) {
    std::vector<const char*> override_ptrs;
    override_ptrs.reserve(overrides.size());
    for (const std::string& s : overrides) {
      override_ptrs.push_back(s.c_str());
    }
    tsr_status status =
        tsr_run(config_path.c_str(),
                override_ptrs.empty() ? nullptr : override_ptrs.data(),
                override_ptrs.size(), errbuf, sizeof errbuf);
    if (status == TSR_OK) {
      std::printf("run complete\n");
    }
    return report(status, errbuf);
  }

  if (analytic->parsed()) {
    tsr_analytic_params params{};
    params.layout_path = layout_path.empty() ? nullptr : layout_path.c_str();
    if (!parse_grid_spec(grid_spec, &params.grid_width,
                         &params.grid_height)) {
      return usage_error("--grid expects WxH, got '" + grid_spec + "'");
    }
    params.gamma = gamma;
    params.repeat = repeat;
    params.action = parse_action(action_arg);
    if (params.action < 0) {
      return usage_error("--action expects north|east|south|west, got '" +
                         action_arg + "'");
    }
    params.target_row = -1;
    params.target_col = -1;
    if (!target_spec.empty() &&
        !parse_cell(target_spec, &params.target_row, &params.target_col)) {
      return usage_error("--target expects row,col, got '" + target_spec +
                         "'");
    }
    params.out_prefix = out_prefix.c_str();
    tsr_status status = tsr_analytic_field(&params, errbuf, sizeof errbuf);
    if (status == TSR_OK) {
      std::printf("wrote %s.csv and %s.svg\n", out_prefix.c_str(),
                  out_prefix.c_str());
    }
    return report(status, errbuf);
  }

  if (plot->parsed()) {
    std::vector<const char*> path_ptrs;
    path_ptrs.reserve(csv_paths.size());
    for (const std::string& s : csv_paths) {
      path_ptrs.push_back(s.c_str());
    }
    tsr_status status = tsr_plot(path_ptrs.data(), path_ptrs.size(),
                                 plot_out.c_str(), errbuf, sizeof errbuf);
    if (status == TSR_OK) {
      std::printf("wrote plots to %s\n", plot_out.c_str());
    }
    return report(status, errbuf);
  }

  if (validate->parsed()) {
    tsr_status status =
        tsr_validate_layout(validate_path.c_str(), errbuf, sizeof errbuf);
    if (status == TSR_OK) {
      std::printf("%s: ok\n", validate_path.c_str());
    }
    return report(status, errbuf);
  }

  return 0;
}
