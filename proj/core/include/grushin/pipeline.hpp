#pragma once

#include <iosfwd>
#include <string>

#include "grushin/config.hpp"

namespace grushin {

// Process exit vocabulary shared by the CLI and the in-process pipeline.
namespace exit_code {
constexpr int ok = 0;
constexpr int internal_error = 1;   // unexpected failure (solver divergence, io)
constexpr int config_error = 2;     // schema/validation problems, bad initial data
constexpr int hypothesis_failed = 3;
constexpr int blowup_detected = 10;  // simulate subcommand only
constexpr int step_underflow = 11;   // simulate subcommand only
constexpr int certificate_failed = 20;
}  // namespace exit_code

// Subcommand drivers.  Each writes its artifacts under config.output_dir,
// prints a flat key=value summary to `out`, and returns a process exit code.
// They throw only for programming errors; expected failures map to codes.

// lambda1/residual/iterations + Poincare sample suite; optional eigenfield CSV
// (config.write_csv), gamma sweep CSV, and operator dump.
int run_eigen(const RunConfig& config, std::ostream& out,
              const std::string& dump_matrix_path = {});

// Functional-inequality report for the config's mode; summary.csv row.
int run_check_conditions(const RunConfig& config, std::ostream& out);

// Time integration without certification; exit reflects the outcome.
// final_field_path, when nonempty, receives the last state as CSV.
int run_simulate(const RunConfig& config, std::ostream& out,
                 const std::string& final_field_path = {});

// Hypothesis gate + simulation + certificate for blow-up or global mode.
int run_certify(const RunConfig& config, std::ostream& out);

// Eigenvalue refinement study over config.convergence_nodes.
int run_convergence(const RunConfig& config, std::ostream& out);

int list_presets(std::ostream& out);

// --- building blocks shared with tests ---

// Product-sine bump scaled by `scale`.
Field bump_field(const GridPtr& grid, double scale);

// Field CSV: one header (x1..xm, y1..yk, value), one row per node in flat
// order, 17 significant digits.
void write_field_csv(const Field& field, const std::string& path);
Field read_field_csv(const GridPtr& grid, const std::string& path);

// Smallest c with J(c * phi) = 0, scaled up by (1 + headroom); bisection on
// the scalar map c -> compute_J(c * phi).  Throws invalid_initial_data when no
// sign change exists (the source cannot make the energy functional positive).
double find_positive_j0_scale(const Field& phi, const SparseOperator& op,
                              const SourceModel& source, double ell, double theta,
                              double headroom);

// Resolves the configured start field (eigenfield descriptors need the
// precomputed eigenfield; pass nullptr otherwise).
Field make_initial_field(const RunConfig& config, const GridPtr& grid, const SparseOperator& op,
                         const Field* eigenfield);

}  // namespace grushin
