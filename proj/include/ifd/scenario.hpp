#ifndef IFD_SCENARIO_HPP
#define IFD_SCENARIO_HPP

#include <cstddef>
#include <optional>
#include <string>

namespace ifd {

// Command-line overrides applied on top of the JSON configuration.
struct ScenarioOverrides {
  std::optional<std::string> output_dir;
  std::optional<std::size_t> nx, nt; // refinement-study grid override
  std::size_t jobs = 0;              // 0 = hardware concurrency
};

struct RunOutcome {
  int status = 0;          // 0 ok, 2 validation, 3 numerical, 4 infeasible
  std::string report_json; // the full report, also written to the output dir
};

// Parses, validates, and executes one scenario; writes report.json and the
// run's CSV artifacts into the output directory. Never throws: failures are
// encoded in `status` and the report's error object.
RunOutcome run_scenario(const std::string& config_text, const ScenarioOverrides& ov = {});

// Validation only; returns 0 or 2 and fills `message` with the JSON-pointer
// diagnostic on failure.
int validate_scenario(const std::string& config_text, std::string& message);

// Human-readable schema of the configuration format.
const std::string& scenario_schema();

} // namespace ifd

#endif
