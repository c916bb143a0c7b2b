#include "aplab.h"

#include <cstring>
#include <sstream>

#include "aplab/workbench.hpp"

using aplab::Error;
using aplab::ErrorCode;
namespace wb = aplab::workbench;

struct aplab_scenario {
  wb::Scenario scenario;
};

struct aplab_report {
  wb::Report report;
  std::string json_text;
};

namespace {

thread_local std::string g_last_error = "";

aplab_status to_status(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument: return APLAB_ERR_INVALID;
    case ErrorCode::EvalError: return APLAB_ERR_EVAL;
    case ErrorCode::SchemaError: return APLAB_ERR_SCHEMA;
    case ErrorCode::NumericalError: return APLAB_ERR_NUMERIC;
    case ErrorCode::IoError: return APLAB_ERR_IO;
  }
  return APLAB_ERR_INVALID;
}

template <typename Fn>
aplab_status guarded(Fn&& fn) {
  try {
    fn();
    return APLAB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return APLAB_ERR_EVAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return APLAB_ERR_EVAL;
  }
}

}  // namespace

extern "C" {

const char* aplab_version(void) { return "0.1.0"; }

const char* aplab_last_error(void) { return g_last_error.c_str(); }

int aplab_builtin_count(void) {
  return static_cast<int>(wb::builtin_ids().size());
}

const char* aplab_builtin_id(int index) {
  static thread_local std::string holder;
  auto ids = wb::builtin_ids();
  if (index < 0 || index >= static_cast<int>(ids.size())) return nullptr;
  holder = ids[index];
  return holder.c_str();
}

aplab_status aplab_scenario_builtin(const char* id, aplab_scenario** out) {
  if (!id || !out) {
    g_last_error = "null argument";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] {
    auto* s = new aplab_scenario{wb::builtin_scenario(id)};
    *out = s;
  });
}

aplab_status aplab_scenario_load_file(const char* path, aplab_scenario** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] {
    auto* s = new aplab_scenario{wb::load_scenario_file(path)};
    *out = s;
  });
}

aplab_status aplab_scenario_load_json(const char* text, aplab_scenario** out) {
  if (!text || !out) {
    g_last_error = "null argument";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
    }
    auto* s = new aplab_scenario{wb::parse_scenario(j)};
    *out = s;
  });
}

void aplab_scenario_free(aplab_scenario* s) { delete s; }

const char* aplab_scenario_id(const aplab_scenario* s) {
  return s ? s->scenario.id.c_str() : nullptr;
}

aplab_status aplab_scenario_set_grid(aplab_scenario* s, int boundary,
                                     int param_axis0) {
  if (!s) {
    g_last_error = "null scenario";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] { s->scenario.set_grid(boundary, param_axis0); });
}

aplab_status aplab_scenario_set_tolerance(aplab_scenario* s, const char* name,
                                          double value) {
  if (!s || !name) {
    g_last_error = "null argument";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] {
    if (wb::default_tolerances().find(name) == wb::default_tolerances().end())
      throw Error(ErrorCode::InvalidArgument,
                  std::string("unknown tolerance '") + name + "'");
    s->scenario.tolerances[name] = value;
  });
}

aplab_status aplab_run(const aplab_scenario* s, aplab_report** out) {
  if (!s || !out) {
    g_last_error = "null argument";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] {
    auto* r = new aplab_report;
    try {
      r->report = wb::run_scenario(s->scenario);
      r->json_text = r->report.to_json();
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void aplab_report_free(aplab_report* r) { delete r; }

const char* aplab_report_json(const aplab_report* r) {
  return r ? r->json_text.c_str() : nullptr;
}

int aplab_report_all_passed(const aplab_report* r) {
  return (r && r->report.all_passed) ? 1 : 0;
}

aplab_status aplab_report_write(const aplab_report* r, const char* dir,
                                const char* formats) {
  if (!r || !dir || !formats) {
    g_last_error = "null argument";
    return APLAB_ERR_INVALID;
  }
  return guarded([&] {
    std::vector<std::string> fmts;
    std::stringstream ss(formats);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) fmts.push_back(item);
    if (fmts.empty())
      throw Error(ErrorCode::InvalidArgument, "no output formats given");
    wb::emit_report(r->report, dir, fmts);
  });
}

}  // extern "C"
