#include "grushin/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

namespace grushin {

const char* run_mode_name(RunMode m) noexcept {
    switch (m) {
        case RunMode::BlowUp: return "blow-up";
        case RunMode::Global: return "global";
        case RunMode::SimulateOnly: return "simulate-only";
    }
    return "?";
}

const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Trace make_trace(RunMode mode, double ell, double theta, double alpha, SourceModel source,
                 std::optional<ConcavityConstants> constants) {
    Trace trace;
    trace.mode = mode;
    trace.ell = ell;
    trace.theta = theta;
    trace.alpha = alpha;
    trace.source = std::move(source);
    trace.constants = std::move(constants);
    if (mode == RunMode::BlowUp && !trace.constants)
        fail(errc::incompatible_trace, "blow-up trace needs concavity constants");
    return trace;
}

double compute_mass(const Field& u, double ell) { return integrate_pow(u, ell + 1.0); }

double compute_J(const Field& u, const SparseOperator& op, const SourceModel& source, double ell,
                 double theta) {
    Field w(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i) w.values[i] = pow_real(u.values[i], ell);
    const double energy = grad_energy(op, w);
    double pot = 0.0;
    for (double v : u.values) pot += F_eval(source, ell, v) - theta;
    return -energy / (ell + 1.0) + u.grid->cell_volume * pot;
}

const TraceRow& append_row(Trace& trace, const SolverState& state, double dt,
                           const SparseOperator& op) {
    TraceRow row;
    row.t = state.t;
    row.dt = dt;
    row.mass = state.mass;

    Field w(state.u.grid);
    for (std::size_t i = 0; i < state.u.values.size(); ++i)
        w.values[i] = pow_real(state.u.values[i], trace.ell);
    row.grad_energy_l = grad_energy(op, w);

    double pot = 0.0;
    for (double v : state.u.values) pot += F_eval(trace.source, trace.ell, v) - trace.theta;
    row.J = -row.grad_energy_l / (trace.ell + 1.0) + state.u.grid->cell_volume * pot;

    row.E = state.time_mass_integral + (trace.constants ? trace.constants->M : 0.0);
    row.E_prime = row.mass;
    row.dissipation = state.dissipation_integral;
    row.max_u = state.max_u;

    // The backward difference epp is the interval average of E''.  Pointwise,
    // E'' E >= (1 + sigma) (E')^2 with (E')^2 / E nondecreasing wherever that
    // inequality holds, so the average dominates the left-endpoint value of
    // (1 + sigma) (E')^2 / E -- comparing against the left endpoint keeps the
    // discrete check a consequence of the continuous one instead of adding a
    // sign-indefinite truncation term (which near the singularity would dwarf
    // the margin).
    row.concavity_defect = std::numeric_limits<double>::quiet_NaN();
    if (trace.mode == RunMode::BlowUp && !trace.rows.empty()) {
        const TraceRow& prev = trace.rows.back();
        if (row.t > prev.t) {
            const double epp = (row.mass - prev.mass) / (row.t - prev.t);
            row.concavity_defect =
                epp * prev.E - (1.0 + trace.constants->sigma) * prev.mass * prev.mass;
        }
    }
    trace.rows.push_back(row);
    return trace.rows.back();
}

const char* const kTraceCsvHeader =
    "t,dt,mass,grad_energy_l,J,E,E_prime,dissipation,max_u,concavity_defect";

std::string trace_to_csv(const Trace& trace) {
    std::string out(kTraceCsvHeader);
    out += '\n';
    char line[512];
    for (const TraceRow& r : trace.rows) {
        std::snprintf(line, sizeof line,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, r.dt,
                      r.mass, r.grad_energy_l, r.J, r.E, r.E_prime, r.dissipation, r.max_u,
                      r.concavity_defect);
        out += line;
    }
    return out;
}

void write_trace_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << trace_to_csv(trace);
    if (!out) fail(errc::io_error, "write failed for " + path);
}

namespace {

Tolerances resolve_tolerances(Tolerances t, const Trace& trace) {
    const TraceRow& first = trace.rows.front();
    const double mass0 = first.mass;
    if (t.tol_J <= 0.0) t.tol_J = std::max(1e-12, 1e-6 * std::fabs(first.J));
    if (t.tol_C <= 0.0) {
        const double sigma = trace.constants ? trace.constants->sigma : 0.0;
        t.tol_C = std::max(1e-12, 1e-6 * (1.0 + sigma) * mass0 * mass0);
    }
    if (t.tol_m <= 0.0) t.tol_m = 1e-10 * mass0;
    return t;
}

CheckResult make_check(std::string name, bool passed, double margin, std::string detail = {}) {
    CheckResult c;
    c.name = std::move(name);
    c.passed = passed;
    c.margin = margin;
    c.detail = std::move(detail);
    return c;
}

CheckResult skipped_check(std::string name, std::string why) {
    CheckResult c;
    c.name = std::move(name);
    c.applicable = false;
    c.detail = std::move(why);
    return c;
}

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_hypothesis_checks(std::vector<CheckResult>& checks, RunMode mode,
                              const HypothesisReport& hypothesis) {
    checks.push_back(make_check("params_admissible", hypothesis.params_ok,
                                hypothesis.params_ok ? 0.0 : -1.0, hypothesis.params_detail));
    const bool want_nonpositive = (mode == RunMode::BlowUp);
    const double cond_margin = want_nonpositive ? -hypothesis.condition.worst_margin
                                                : hypothesis.condition.worst_margin;
    checks.push_back(make_check("condition_sampled", hypothesis.condition.holds, cond_margin,
                                "worst at u=" + num17(hypothesis.condition.worst_u)));
    checks.push_back(make_check("condition_tail", hypothesis.condition.holds_asymptotically,
                                hypothesis.condition.holds_asymptotically ? 0.0 : -1.0,
                                "leading power " + num17(hypothesis.condition.leading_power)));
    if (hypothesis.j0_required)
        checks.push_back(make_check("j0_positive", hypothesis.j0 > 0.0, hypothesis.j0));
    else
        // alpha == 0 removes the energy functional from the argument entirely,
        // so the sign requirement is vacuous -- record it as satisfied, not as
        // "could not evaluate" (which would demote the verdict).
        checks.push_back(make_check("j0_positive", true, 0.0,
                                    "waived: alpha == 0 never multiplies the energy functional"));
}

}  // namespace

Certificate hypothesis_certificate(RunMode mode, const HypothesisReport& hypothesis) {
    Certificate cert;
    cert.mode = mode;
    cert.hypothesis = hypothesis;
    append_hypothesis_checks(cert.checks, mode, hypothesis);
    bool any_fail = false;
    for (const CheckResult& c : cert.checks)
        if (c.applicable && !c.passed) any_fail = true;
    cert.verdict = any_fail ? Verdict::Fail : Verdict::Inconclusive;
    return cert;
}

Certificate certify(const Trace& trace, RunMode mode, const HypothesisReport& hypothesis,
                    const RunSummary& summary, Tolerances tolerances) {
    if (mode == RunMode::SimulateOnly)
        fail(errc::incompatible_trace, "nothing to certify in simulate-only mode");
    if (trace.mode != mode)
        fail(errc::incompatible_trace, std::string("trace was recorded in ") +
                                           run_mode_name(trace.mode) + " mode, certificate wants " +
                                           run_mode_name(mode));
    if (trace.rows.empty()) fail(errc::incompatible_trace, "empty trace");

    Certificate cert;
    cert.mode = mode;
    cert.hypothesis = hypothesis;
    cert.summary = summary;
    cert.constants = trace.constants;
    cert.tolerances = resolve_tolerances(tolerances, trace);
    const Tolerances& tol = cert.tolerances;
    auto& checks = cert.checks;

    // --- hypothesis phase ---
    append_hypothesis_checks(checks, mode, hypothesis);

    const auto& rows = trace.rows;
    if (mode == RunMode::BlowUp) {
        // J monotone within tol_J between consecutive samples
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < rows.size(); ++i)
            worst = std::min(worst, rows[i].J - rows[i - 1].J + tol.tol_J);
        if (rows.size() < 2)
            checks.push_back(skipped_check("j_monotone", "need at least 2 samples"));
        else
            checks.push_back(make_check("j_monotone", worst >= 0.0, worst));

        // concavity defect and the E'' >= alpha (ell+1) J lower bound, past warmup
        const std::size_t start = static_cast<std::size_t>(tol.warmup_samples);
        if (rows.size() <= start) {
            checks.push_back(skipped_check("concavity_defect", "not enough samples past warmup"));
            checks.push_back(skipped_check("mass_accel_bound", "not enough samples past warmup"));
        } else {
            double worst_defect = std::numeric_limits<double>::infinity();
            double worst_t = rows[start].t;
            for (std::size_t i = start; i < rows.size(); ++i) {
                const double m = rows[i].concavity_defect + tol.tol_C;
                if (m < worst_defect) {
                    worst_defect = m;
                    worst_t = rows[i].t;
                }
            }
            checks.push_back(make_check("concavity_defect", worst_defect >= 0.0, worst_defect,
                                        "worst at t=" + num17(worst_t)));

            // epp averages E'' over [t_{i-1}, t_i]; J is nondecreasing (its own
            // check), so the left-endpoint J is the valid minorant of that
            // average -- a right-endpoint comparison would be off by the growth
            // of J across the interval, which near the singularity exceeds any
            // genuine margin.
            const double tol_accel =
                std::max(1e-12, 1e-6 * trace.alpha * (trace.ell + 1.0) * std::fabs(rows.front().J));
            double worst_accel = std::numeric_limits<double>::infinity();
            for (std::size_t i = start; i < rows.size(); ++i) {
                const double epp = (rows[i].mass - rows[i - 1].mass) / (rows[i].t - rows[i - 1].t);
                worst_accel = std::min(
                    worst_accel, epp - trace.alpha * (trace.ell + 1.0) * rows[i - 1].J + tol_accel);
            }
            checks.push_back(make_check("mass_accel_bound", worst_accel >= 0.0, worst_accel));
        }

        const bool ended_singular =
            summary.outcome == Outcome::BlowupDetected || summary.outcome == Outcome::StepUnderflow;
        checks.push_back(make_check("outcome_singular", ended_singular, ended_singular ? 0.0 : -1.0,
                                    outcome_name(summary.outcome)));

        if (trace.constants) {
            const double limit = (1.0 + tol.blowup_margin) * trace.constants->Tstar_bound;
            if (ended_singular)
                checks.push_back(make_check("blowup_time_bound", summary.t_final <= limit,
                                            limit - summary.t_final,
                                            "t_detect=" + num17(summary.t_final) +
                                                " bound=" + num17(trace.constants->Tstar_bound)));
            else
                checks.push_back(skipped_check("blowup_time_bound", "no singular time detected"));
        }
    } else {
        // global mode: mass nonincreasing sample to sample, horizon reached,
        // final mass controlled by the initial one
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < rows.size(); ++i)
            worst = std::min(worst, rows[i - 1].mass - rows[i].mass + tol.tol_m);
        if (rows.size() < 2)
            checks.push_back(skipped_check("mass_monotone", "need at least 2 samples"));
        else
            checks.push_back(make_check("mass_monotone", worst >= 0.0, worst));

        checks.push_back(make_check("outcome_horizon", summary.outcome == Outcome::ReachedHorizon,
                                    summary.outcome == Outcome::ReachedHorizon ? 0.0 : -1.0,
                                    outcome_name(summary.outcome)));

        const double mass0 = rows.front().mass;
        const double cap = mass0 * (1.0 + 1e-6);
        checks.push_back(
            make_check("final_mass_bound", rows.back().mass <= cap, cap - rows.back().mass));
    }

    bool any_fail = false, any_skip = false;
    for (const CheckResult& c : checks) {
        if (!c.applicable)
            any_skip = true;
        else if (!c.passed)
            any_fail = true;
    }
    cert.verdict = any_fail ? Verdict::Fail : (any_skip ? Verdict::Inconclusive : Verdict::Pass);
    return cert;
}

const CheckResult* Certificate::find(const std::string& name) const {
    for (const CheckResult& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string Certificate::to_kv() const {
    std::string out;
    out += std::string("mode=") + run_mode_name(mode) + "\n";
    out += std::string("verdict=") + verdict_name(verdict) + "\n";
    out += std::string("outcome=") + outcome_name(summary.outcome) + "\n";
    out += "t_final=" + num17(summary.t_final) + "\n";
    out += "steps=" + std::to_string(summary.steps) + "\n";
    out += "lambda1=" + num17(hypothesis.lambda1) + "\n";
    out += "j0=" + num17(hypothesis.j0) + "\n";
    out += "mass0=" + num17(hypothesis.mass0) + "\n";
    out += "tol_J=" + num17(tolerances.tol_J) + "\n";
    out += "tol_C=" + num17(tolerances.tol_C) + "\n";
    out += "tol_m=" + num17(tolerances.tol_m) + "\n";
    if (constants) {
        out += "sigma=" + num17(constants->sigma) + "\n";
        out += "M=" + num17(constants->M) + "\n";
        out += "tstar_bound=" + num17(constants->Tstar_bound) + "\n";
    }
    for (const CheckResult& c : checks) {
        out += "check." + c.name + "=" +
               (c.applicable ? (c.passed ? "pass" : "fail") : "skipped") + "\n";
        if (c.applicable) out += "check." + c.name + ".margin=" + num17(c.margin) + "\n";
        if (!c.detail.empty()) out += "check." + c.name + ".detail=" + c.detail + "\n";
    }
    return out;
}

std::string Certificate::to_json() const {
    nlohmann::json j;
    j["mode"] = run_mode_name(mode);
    j["verdict"] = verdict_name(verdict);
    j["outcome"] = outcome_name(summary.outcome);
    j["t_final"] = summary.t_final;
    j["steps"] = summary.steps;
    j["hypothesis"] = {
        {"lambda1", hypothesis.lambda1},
        {"params_ok", hypothesis.params_ok},
        {"j0", hypothesis.j0},
        {"mass0", hypothesis.mass0},
        {"j0_required", hypothesis.j0_required},
        {"condition",
         {{"holds", hypothesis.condition.holds},
          {"holds_asymptotically", hypothesis.condition.holds_asymptotically},
          {"worst_margin", hypothesis.condition.worst_margin},
          {"worst_u", hypothesis.condition.worst_u},
          {"samples", hypothesis.condition.samples},
          {"u_max", hypothesis.condition.u_max},
          {"leading_power", hypothesis.condition.leading_power},
          {"leading_coeff", hypothesis.condition.leading_coeff}}},
    };
    j["tolerances"] = {{"tol_J", tolerances.tol_J},
                       {"tol_C", tolerances.tol_C},
                       {"tol_m", tolerances.tol_m},
                       {"blowup_margin", tolerances.blowup_margin},
                       {"warmup_samples", tolerances.warmup_samples}};
    if (constants) {
        j["constants"] = {{"sigma", constants->sigma},
                          {"M", constants->M},
                          {"tstar_bound", constants->Tstar_bound},
                          {"j0", constants->J0},
                          {"mass0", constants->mass0}};
    }
    nlohmann::json checks_json = nlohmann::json::array();
    for (const CheckResult& c : checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["status"] = c.applicable ? (c.passed ? "pass" : "fail") : "skipped";
        if (c.applicable) cj["margin"] = c.margin;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks_json.push_back(cj);
    }
    j["checks"] = checks_json;
    return j.dump(2) + "\n";
}

void write_certificate(const Certificate& cert, const std::string& kv_path,
                       const std::string& json_path) {
    std::ofstream kv(kv_path, std::ios::binary);
    if (!kv) fail(errc::io_error, "cannot open " + kv_path);
    kv << cert.to_kv();
    std::ofstream js(json_path, std::ios::binary);
    if (!js) fail(errc::io_error, "cannot open " + json_path);
    js << cert.to_json();
}

}  // namespace grushin
