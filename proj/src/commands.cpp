#include "commands.hpp"

#include <filesystem>
#include <string>

#include "csv.hpp"
#include "error.hpp"
#include "svg.hpp"

namespace tsrlab {

RunArtifacts cmd_run(const std::string& config_path,
                     const std::vector<std::string>& overrides) {
  return execute_run(load_run_config(config_path, overrides));
}

namespace {

std::string field_csv(const FieldGrid& field) {
  std::string out;
  for (int r = 0; r < field.height; ++r) {
    for (int c = 0; c < field.width; ++c) {
      if (c > 0) {
        out += ',';
      }
      if (field.has(r, c)) {
        out += format_double(field.at(r, c));
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace

RunArtifacts cmd_analytic(const AnalyticRequest& req) {
  if (req.repeat < 1) {
    throw Error(ErrorCode::InvalidArgument, "repeat must be at least 1");
  }
  if (req.repeat > 1 && (req.action < 0 || req.action >= kNumActions)) {
    throw Error(ErrorCode::InvalidArgument,
                "action must name one of the four moves");
  }

  TransitionModel model;
  FieldGrid field;
  if (!req.layout_path.empty()) {
    GridLayout layout = GridLayout::load(req.layout_path);
    Gridworld env(layout);
    model = diffusion_model(layout);
    int row = req.target_row >= 0 ? req.target_row : layout.height() / 2;
    int col = req.target_col >= 0 ? req.target_col : layout.width() / 2;
    int target = env.state_at({row, col});
    if (target < 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "target cell (" + std::to_string(row) + "," +
                      std::to_string(col) +
                      ") is a wall or out of bounds; pass --target");
    }
    Eigen::MatrixXd m =
        req.repeat == 1
            ? analytic_sr(model, req.gamma)
            : analytic_tsr(model, req.gamma,
                           req.repeat)[static_cast<size_t>(req.action)];
    field = sr_field(m, target, layout);
  } else {
    if (req.grid_width < 1 || req.grid_height < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "grid dimensions must be positive");
    }
    model = open_grid_model(req.grid_width, req.grid_height);
    int row = req.target_row >= 0 ? req.target_row : req.grid_height / 2;
    int col = req.target_col >= 0 ? req.target_col : req.grid_width / 2;
    if (row >= req.grid_height || col >= req.grid_width) {
      throw Error(ErrorCode::InvalidArgument, "target cell out of bounds");
    }
    int target = row * req.grid_width + col;
    Eigen::MatrixXd m =
        req.repeat == 1
            ? analytic_sr(model, req.gamma)
            : analytic_tsr(model, req.gamma,
                           req.repeat)[static_cast<size_t>(req.action)];
    field = sr_field_open(m, target, req.grid_width, req.grid_height);
  }

  std::string title = "expected discounted occupancy, gamma " +
                      format_double(req.gamma);
  if (req.repeat > 1) {
    title += ", ";
    title += action_name(req.action);
    title += " x";
    title += std::to_string(req.repeat);
  }

  RunArtifacts artifacts;
  std::string csv_path = req.out_prefix + ".csv";
  write_file(csv_path, field_csv(field));
  artifacts.files.push_back(csv_path);
  std::string svg_path = req.out_prefix + ".svg";
  write_file(svg_path, heatmap_svg(field, title));
  artifacts.files.push_back(svg_path);
  return artifacts;
}

namespace {

std::string series_label(const std::string& path) {
  std::string stem = std::filesystem::path(path).stem().string();
  const std::string suffix = "_aggregate";
  if (stem.size() > suffix.size() &&
      stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
    stem.resize(stem.size() - suffix.size());
  }
  return stem;
}

}  // namespace

RunArtifacts cmd_plot(const std::vector<std::string>& csv_paths,
                      const std::string& out_dir) {
  if (csv_paths.empty()) {
    throw Error(ErrorCode::EmptyInput, "no CSV files given");
  }
  std::vector<std::vector<AggregateCsvRow>> files;
  for (const std::string& path : csv_paths) {
    try {
      files.push_back(parse_aggregate_csv(read_file(path)));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) {
        throw;
      }
      throw Error(e.code(), path + ": " + e.what());
    }
  }
  const auto& reference = files.front();
  for (size_t f = 1; f < files.size(); ++f) {
    if (files[f].size() != reference.size()) {
      throw Error(ErrorCode::ConfigInvalid,
                  csv_paths[f] + ": row count differs from " + csv_paths[0]);
    }
    for (size_t i = 0; i < reference.size(); ++i) {
      if (files[f][i].phase != reference[i].phase ||
          files[f][i].episode != reference[i].episode ||
          files[f][i].metric != reference[i].metric) {
        throw Error(ErrorCode::ConfigInvalid,
                    csv_paths[f] + ": row structure differs from " +
                        csv_paths[0]);
      }
    }
  }

  int phase1_len = 0;
  bool has_phase2 = false;
  for (const auto& row : reference) {
    if (row.phase == 1) {
      phase1_len = std::max(phase1_len, row.episode + 1);
    } else {
      has_phase2 = true;
    }
  }

  const char* metric_order[] = {"return", "transitions", "decisions", "tv"};
  std::filesystem::create_directories(out_dir);
  RunArtifacts artifacts;
  for (const char* metric : metric_order) {
    LinePlotSpec spec;
    spec.title = metric;
    spec.x_label = "episode";
    spec.y_label = metric;
    if (has_phase2) {
      spec.marker_x = phase1_len - 0.5;
    }
    bool any = false;
    for (size_t f = 0; f < files.size(); ++f) {
      PlotSeries series;
      series.label = series_label(csv_paths[f]);
      for (const auto& row : files[f]) {
        if (row.metric != metric) {
          continue;
        }
        double x = row.phase == 1 ? row.episode : phase1_len + row.episode;
        series.x.push_back(x);
        series.mean.push_back(row.mean);
        series.stderr_.push_back(row.stderr_);
      }
      if (!series.x.empty()) {
        any = true;
        spec.series.push_back(std::move(series));
      }
    }
    if (!any) {
      continue;
    }
    std::filesystem::path path =
        std::filesystem::path(out_dir) / (std::string(metric) + ".svg");
    write_file(path.string(), line_plot_svg(spec));
    artifacts.files.push_back(path.string());
  }
  return artifacts;
}

void cmd_validate_layout(const std::string& path) {
  GridLayout layout = GridLayout::load(path);
  std::vector<Coord> unreachable = layout.unreachable_cells();
  if (!unreachable.empty()) {
    std::string msg = std::to_string(unreachable.size()) +
                      " cell(s) unreachable from the start, first at (" +
                      std::to_string(unreachable.front().row) + "," +
                      std::to_string(unreachable.front().col) + ")";
    throw Error(ErrorCode::LayoutUnreachable, msg);
  }
}

}  // namespace tsrlab
