#include "ifd/ifd.h"

#include <string>

#include "ifd/scenario.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

} // namespace

struct ifd_scenario {
  std::string config_text;
  ifd::ScenarioOverrides overrides;
  std::string report;
  bool has_report = false;
};

extern "C" {

int ifd_scenario_parse(const char* config_json, ifd_scenario** out) {
  if (out) *out = nullptr;
  if (!config_json || !out) {
    set_error("null argument");
    return 2;
  }
  std::string message;
  int status = ifd::validate_scenario(config_json, message);
  if (status != 0) {
    set_error(message);
    return status;
  }
  set_error("");
  *out = new ifd_scenario{config_json, {}, {}, false};
  return 0;
}

int ifd_validate(const char* config_json) {
  if (!config_json) {
    set_error("null argument");
    return 2;
  }
  std::string message;
  int status = ifd::validate_scenario(config_json, message);
  set_error(message);
  return status;
}

int ifd_scenario_set_output_dir(ifd_scenario* s, const char* dir) {
  if (!s || !dir) {
    set_error("null argument");
    return 2;
  }
  s->overrides.output_dir = dir;
  set_error("");
  return 0;
}

int ifd_scenario_set_grid(ifd_scenario* s, unsigned nx, unsigned nt) {
  if (!s) {
    set_error("null argument");
    return 2;
  }
  if (nx < 8 || nt < 8) {
    set_error("grid override: nx and nt must be >= 8");
    return 2;
  }
  s->overrides.nx = nx;
  s->overrides.nt = nt;
  set_error("");
  return 0;
}

int ifd_scenario_set_jobs(ifd_scenario* s, unsigned jobs) {
  if (!s) {
    set_error("null argument");
    return 2;
  }
  s->overrides.jobs = jobs;
  set_error("");
  return 0;
}

int ifd_scenario_run(ifd_scenario* s) {
  if (!s) {
    set_error("null argument");
    return 2;
  }
  try {
    ifd::RunOutcome outcome = ifd::run_scenario(s->config_text, s->overrides);
    s->report = std::move(outcome.report_json);
    s->has_report = true;
    if (outcome.status != 0)
      set_error("scenario failed with status " + std::to_string(outcome.status) +
                "; see the report's error object");
    else
      set_error("");
    return outcome.status;
  } catch (const std::exception& e) {
    set_error(e.what());
    return 3;
  }
}

const char* ifd_scenario_report_json(const ifd_scenario* s) {
  return (s && s->has_report) ? s->report.c_str() : nullptr;
}

const char* ifd_schema(void) { return ifd::scenario_schema().c_str(); }

const char* ifd_last_error(void) { return g_last_error.c_str(); }

void ifd_scenario_free(ifd_scenario* s) { delete s; }

} // extern "C"
