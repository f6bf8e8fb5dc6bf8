#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"

namespace grushin {

enum class RunMode { BlowUp, Global, SimulateOnly };

const char* run_mode_name(RunMode m) noexcept;

// One sampled row of monitored quantities.  concavity_defect is only defined in
// blow-up mode from the second row on (it needs a backward difference); it is
// NaN otherwise, and serializes as "nan".
struct TraceRow {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;           // integral u^{ell+1}
    double grad_energy_l = 0.0;  // integral |grad_gamma u^ell|^2
    double J = 0.0;              // -(1/(ell+1)) grad_energy_l + integral (F(u) - theta)
    double E = 0.0;              // time_mass_integral (+ M in blow-up mode)
    double E_prime = 0.0;        // = mass
    double dissipation = 0.0;    // running (Fp) right-hand side
    double max_u = 0.0;
    double concavity_defect = 0.0;  // avg E'' over the last interval vs (1+sigma)(E')^2/E
                                    // at its left endpoint (the valid discrete minorant)
};

struct Trace {
    RunMode mode = RunMode::SimulateOnly;
    double ell = 1.0;
    double theta = 0.0;
    double alpha = 0.0;
    SourceModel source;
    std::optional<ConcavityConstants> constants;  // present in blow-up mode
    std::vector<TraceRow> rows;
};

Trace make_trace(RunMode mode, double ell, double theta, double alpha, SourceModel source,
                 std::optional<ConcavityConstants> constants = std::nullopt);

// J(u) = -(1/(ell+1)) integral |grad_gamma u^ell|^2 + integral (F(u) - theta).
double compute_J(const Field& u, const SparseOperator& op, const SourceModel& source, double ell,
                 double theta);

// integral u^{ell+1}.
double compute_mass(const Field& u, double ell);

// Computes all monitored quantities for the state and appends a row.
const TraceRow& append_row(Trace& trace, const SolverState& state, double dt,
                           const SparseOperator& op);

// Fixed schema, header + one row per sample, 17 significant digits.
extern const char* const kTraceCsvHeader;
std::string trace_to_csv(const Trace& trace);
void write_trace_csv(const Trace& trace, const std::string& path);

// Everything the certifier needs to know about the pre-run hypothesis phase.
struct HypothesisReport {
    double lambda1 = 0.0;
    bool params_ok = false;
    std::string params_detail;     // constraint name when params_ok is false
    ConditionReport condition;
    double j0 = 0.0;
    double mass0 = 0.0;
    bool j0_required = true;       // global mode with alpha == 0 does not need J0 > 0
};

struct CheckResult {
    std::string name;
    bool applicable = true;  // false: could not be evaluated (e.g. not enough samples)
    bool passed = false;
    double margin = 0.0;     // signed distance to the tolerance (>= 0 means pass)
    std::string detail;
};

enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v) noexcept;

struct Tolerances {
    // <= 0 entries are replaced by the defaults derived from the first row:
    //   tol_J = max(1e-12, 1e-6 |J(0)|)
    //   tol_C = max(1e-12, 1e-6 (1 + sigma) mass0^2)
    //   tol_m = 1e-10 mass0
    double tol_J = 0.0;
    double tol_C = 0.0;
    double tol_m = 0.0;
    double blowup_margin = 0.1;  // accepted overshoot of the detection time vs Tstar_bound
    int warmup_samples = 3;      // rows excluded from second-difference checks
};

struct Certificate {
    RunMode mode = RunMode::SimulateOnly;
    Verdict verdict = Verdict::Inconclusive;
    std::vector<CheckResult> checks;
    HypothesisReport hypothesis;
    RunSummary summary;
    Tolerances tolerances;  // the resolved values actually used
    std::optional<ConcavityConstants> constants;  // blow-up mode: what was certified against

    const CheckResult* find(const std::string& name) const;
    std::string to_kv() const;    // flat key=value text
    std::string to_json() const;  // same content as JSON
};

// Blow-up mode checks: hypothesis (params, condition, J0 > 0), J monotone
// within tol_J, concavity defect >= -tol_C and E'' - alpha (ell+1) J >= -tol
// past warmup, outcome is blow-up/underflow, detection time <= (1 + margin)
// Tstar_bound.  Global mode checks: hypothesis (params, condition, J0 when
// required), mass nonincreasing within tol_m, outcome reached the horizon,
// final mass <= mass0 (1 + 1e-6).  Throws incompatible_trace when the trace
// was recorded under a different mode.
Certificate certify(const Trace& trace, RunMode mode, const HypothesisReport& hypothesis,
                    const RunSummary& summary, Tolerances tolerances = {});

// Certificate covering only the pre-run hypothesis phase; used when the
// hypothesis gate fails and no trajectory exists to certify.
Certificate hypothesis_certificate(RunMode mode, const HypothesisReport& hypothesis);

void write_certificate(const Certificate& cert, const std::string& kv_path,
                       const std::string& json_path);

}  // namespace grushin
