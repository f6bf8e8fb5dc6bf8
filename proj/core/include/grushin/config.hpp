#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grushin/diagnostics.hpp"
#include "grushin/grid.hpp"
#include "grushin/solver.hpp"

namespace grushin {

// A fully validated run document.  parse_config rejects unknown keys
// (schema_error) and out-of-range values (validation_error), naming the
// offending JSON path, so a passing document is ready to execute.
struct RunConfig {
    RunMode mode = RunMode::SimulateOnly;
    std::uint64_t seed = 0;
    DomainSpec domain;
    SolverConfig solver;           // carries ell, source, initial data
    ConcavityParams params;        // alpha/beta/theta unused in simulate-only mode
    bool beta_auto = false;        // "max-admissible": resolve against lambda1 at runtime
    double eigen_tol = 1e-10;
    int eigen_max_iter = 10000;
    int poincare_trials = 100;
    std::vector<double> gamma_sweep;      // eigen subcommand: extra gamma values
    std::vector<int> convergence_nodes;   // convergence subcommand: per-axis node counts
    double condition_u_max = 1e6;
    int condition_samples = 400;
    std::string output_dir = "out";
    bool write_csv = true;
    Tolerances tolerances;
};

// Parses and validates a JSON document.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);

// Built-in experiment documents; parse_config(preset_document(name)) always
// succeeds.  Names: blowup-p3, global-linear, heat-decay, eigen-gamma-sweep,
// convergence-operator.
std::vector<std::string> preset_names();
const std::string& preset_document(const std::string& name);  // validation_error if unknown

}  // namespace grushin
