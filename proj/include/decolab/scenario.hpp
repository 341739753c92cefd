// scenario.hpp — config-driven scenario execution. A scenario file is a
// single JSON object with a "kind" tag selecting the model, a shared time
// grid block, and a kind-specific parameter block (see docs/scenario-schema.md).
// Runs are deterministic: identical configs produce byte-identical CSV and
// summary outputs. Files are staged and renamed only after the whole run
// succeeds, so failures leave no partial outputs.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "decolab/common.hpp"

namespace decolab::cli {

enum class ScenarioKind { modes, friedrichs, omnes, basis, khalfin, bipart };

struct TimeGrid {
    double t_max = 1.0;
    std::size_t n_points = 2;
    bool log_spacing = false;
    double t_min = 0.0;  // first point; log spacing requires t_min > 0

    std::vector<double> points() const;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::modes;
    TimeGrid grid;
    std::string out_dir;       // from the config file; may be empty
    std::string source_path;   // where the config was loaded from
    std::string body;          // raw JSON text of the scenario file
};

// Parse + full validation. Throws io_error when unreadable, config_error
// (with joined diagnostics) when invalid.
ScenarioConfig load_config(const std::string& path);

// Schema and invariant check without execution; returns every violation
// found (empty means valid). Throws io_error only when unreadable.
std::vector<std::string> validate_config(const std::string& path);

struct RunResult {
    std::filesystem::path out_dir;
    std::vector<std::string> files;   // names written (CSV + summary.json)
    std::string summary_json;         // serialized summary, as written
};

// Executes the scenario and writes its curve CSVs plus summary.json under
// the resolved output directory. Precedence for the directory:
// out_override > config out_dir > DECOLAB_OUT > current directory.
RunResult run_scenario(const ScenarioConfig& cfg,
                       const std::string& out_override = "",
                       bool quiet = true);

// Shortest round-trip decimal form of a double (deterministic CSV cell).
std::string format_double(double x);

}  // namespace decolab::cli
