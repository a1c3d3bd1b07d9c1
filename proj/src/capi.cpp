#include "tsrlab/tsrlab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "commands.hpp"
#include "error.hpp"
#include "grid.hpp"

using tsrlab::Error;
using tsrlab::ErrorCode;

struct tsr_layout {
  tsrlab::GridLayout layout;
};

struct tsr_env {
  tsrlab::Gridworld world;
};

namespace {

void fill_errbuf(char* errbuf, size_t errlen, const char* message) {
  if (errbuf == nullptr || errlen == 0) {
    return;
  }
  size_t n = std::strlen(message);
  if (n >= errlen) {
    n = errlen - 1;
  }
  std::memcpy(errbuf, message, n);
  errbuf[n] = '\0';
}

tsr_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
      return TSR_ERR_IO;
    case ErrorCode::NonRectangular:
    case ErrorCode::UnknownCharacter:
    case ErrorCode::WrongStartCount:
    case ErrorCode::WrongGoalCount:
    case ErrorCode::ConfigInvalid:
      return TSR_ERR_PARSE;
    case ErrorCode::LayoutUnreachable:
      return TSR_ERR_LAYOUT_INVALID;
    case ErrorCode::InvalidState:
    case ErrorCode::InvalidAction:
    case ErrorCode::EmptyInput:
    case ErrorCode::InvalidEpsilon:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::EmptyTrace:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::LengthMismatch:
    case ErrorCode::InvalidArgument:
      return TSR_ERR_INVALID_ARGUMENT;
    case ErrorCode::SingularSystem:
    case ErrorCode::Internal:
      return TSR_ERR_INTERNAL;
  }
  return TSR_ERR_INTERNAL;
}

// Runs `fn`, translating every exception into a status + message.
template <typename Fn>
tsr_status guarded(char* errbuf, size_t errlen, Fn&& fn) {
  try {
    fn();
    return TSR_OK;
  } catch (const Error& e) {
    fill_errbuf(errbuf, errlen, e.what());
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    fill_errbuf(errbuf, errlen, "out of memory");
    return TSR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    fill_errbuf(errbuf, errlen, e.what());
    return TSR_ERR_INTERNAL;
  } catch (...) {
    fill_errbuf(errbuf, errlen, "unknown error");
    return TSR_ERR_INTERNAL;
  }
}

tsr_status require(bool condition, const char* message, char* errbuf,
                   size_t errlen) {
  if (condition) {
    return TSR_OK;
  }
  fill_errbuf(errbuf, errlen, message);
  return TSR_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* tsr_status_name(tsr_status status) {
  switch (status) {
    case TSR_OK:
      return "ok";
    case TSR_ERR_IO:
      return "io error";
    case TSR_ERR_PARSE:
      return "parse error";
    case TSR_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case TSR_ERR_LAYOUT_INVALID:
      return "layout invalid";
    case TSR_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* tsr_version(void) { return "1.0.0"; }

tsr_status tsr_layout_load(const char* path, tsr_layout** out, char* errbuf,
                           size_t errlen) {
  if (tsr_status s = require(path && out, "path and out must be non-NULL",
                             errbuf, errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    *out = new tsr_layout{tsrlab::GridLayout::load(path)};
  });
}

tsr_status tsr_layout_parse(const char* text, tsr_layout** out, char* errbuf,
                            size_t errlen) {
  if (tsr_status s = require(text && out, "text and out must be non-NULL",
                             errbuf, errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    *out = new tsr_layout{tsrlab::GridLayout::parse(text)};
  });
}

void tsr_layout_free(tsr_layout* layout) { delete layout; }

int tsr_layout_width(const tsr_layout* layout) {
  return layout ? layout->layout.width() : 0;
}

int tsr_layout_height(const tsr_layout* layout) {
  return layout ? layout->layout.height() : 0;
}

int tsr_layout_unreachable_count(const tsr_layout* layout) {
  if (!layout) {
    return -1;
  }
  return static_cast<int>(layout->layout.unreachable_cells().size());
}

tsr_status tsr_validate_layout(const char* path, char* errbuf, size_t errlen) {
  if (tsr_status s = require(path != nullptr, "path must be non-NULL", errbuf,
                             errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] { tsrlab::cmd_validate_layout(path); });
}

tsr_status tsr_env_create(const tsr_layout* layout, int active_goal,
                          int step_cap, tsr_env** out, char* errbuf,
                          size_t errlen) {
  if (tsr_status s = require(layout && out, "layout and out must be non-NULL",
                             errbuf, errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    *out = new tsr_env{
        tsrlab::Gridworld(layout->layout, active_goal, step_cap)};
  });
}

void tsr_env_free(tsr_env* env) { delete env; }

int tsr_env_num_states(const tsr_env* env) {
  return env ? env->world.num_states() : 0;
}

int tsr_env_start_state(const tsr_env* env) {
  return env ? env->world.start_state() : -1;
}

int tsr_env_is_terminal(const tsr_env* env, int state) {
  if (!env) {
    return -1;
  }
  try {
    return env->world.is_terminal(state) ? 1 : 0;
  } catch (...) {
    return -1;
  }
}

tsr_status tsr_env_step(const tsr_env* env, int state, int action,
                        tsr_step_result* result, char* errbuf, size_t errlen) {
  if (tsr_status s = require(env && result, "env and result must be non-NULL",
                             errbuf, errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    tsrlab::StepOutcome outcome = env->world.step(state, action);
    result->next_state = outcome.next_state;
    result->reward = outcome.reward;
    result->terminal = outcome.terminal ? 1 : 0;
    result->truncated = outcome.truncated ? 1 : 0;
  });
}

tsr_status tsr_run(const char* config_path, const char* const* overrides,
                   size_t n_overrides, char* errbuf, size_t errlen) {
  if (tsr_status s = require(config_path != nullptr,
                             "config_path must be non-NULL", errbuf, errlen)) {
    return s;
  }
  if (tsr_status s =
          require(n_overrides == 0 || overrides != nullptr,
                  "overrides must be non-NULL when n_overrides > 0", errbuf,
                  errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    std::vector<std::string> extra;
    extra.reserve(n_overrides);
    for (size_t i = 0; i < n_overrides; ++i) {
      if (overrides[i] == nullptr) {
        throw Error(ErrorCode::InvalidArgument,
                    "override " + std::to_string(i) + " is NULL");
      }
      extra.emplace_back(overrides[i]);
    }
    tsrlab::cmd_run(config_path, extra);
  });
}

tsr_status tsr_analytic_field(const tsr_analytic_params* params, char* errbuf,
                              size_t errlen) {
  if (tsr_status s = require(params != nullptr, "params must be non-NULL",
                             errbuf, errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    tsrlab::AnalyticRequest req;
    if (params->layout_path != nullptr) {
      req.layout_path = params->layout_path;
    }
    req.grid_width = params->grid_width;
    req.grid_height = params->grid_height;
    req.gamma = params->gamma;
    req.repeat = params->repeat;
    req.action = params->action;
    req.target_row = params->target_row;
    req.target_col = params->target_col;
    if (params->out_prefix != nullptr) {
      req.out_prefix = params->out_prefix;
    }
    tsrlab::cmd_analytic(req);
  });
}

tsr_status tsr_plot(const char* const* csv_paths, size_t n_paths,
                    const char* out_dir, char* errbuf, size_t errlen) {
  if (tsr_status s = require(csv_paths != nullptr && out_dir != nullptr,
                             "csv_paths and out_dir must be non-NULL", errbuf,
                             errlen)) {
    return s;
  }
  return guarded(errbuf, errlen, [&] {
    std::vector<std::string> paths;
    paths.reserve(n_paths);
    for (size_t i = 0; i < n_paths; ++i) {
      if (csv_paths[i] == nullptr) {
        throw Error(ErrorCode::InvalidArgument,
                    "csv path " + std::to_string(i) + " is NULL");
      }
      paths.emplace_back(csv_paths[i]);
    }
    tsrlab::cmd_plot(paths, out_dir);
  });
}

}  // extern "C"
