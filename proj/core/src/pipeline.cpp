#include "grushin/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace grushin {

namespace {

namespace fs = std::filesystem;

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(errc::io_error, "cannot create output directory " + dir + ": " + ec.message());
}

std::string axis_name(const DomainSpec& spec, std::size_t d) {
    if (d < static_cast<std::size_t>(spec.m)) return "x" + std::to_string(d + 1);
    return "y" + std::to_string(d + 1 - static_cast<std::size_t>(spec.m));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path);
    out << text;
    if (!out) fail(errc::io_error, "write failed for " + path);
}

struct SpectralSetup {
    GridPtr grid;
    SparseOperator op;
    EigenResult eig;
};

SpectralSetup spectral_setup(const RunConfig& config) {
    SpectralSetup s;
    s.grid = build_grid(config.domain);
    s.op = assemble(*s.grid);
    EigenOptions opts;
    opts.tol = config.eigen_tol;
    opts.max_iter = config.eigen_max_iter;
    s.eig = smallest_eigenvalue(s.op, s.grid, opts);
    return s;
}

ConcavityParams resolved_params(const RunConfig& config, double lambda1) {
    ConcavityParams p = config.params;
    if (config.beta_auto) p.beta = beta_cap(p, lambda1);
    return p;
}

// Pre-run hypothesis phase shared by check-conditions and certify.
HypothesisReport build_hypothesis(const RunConfig& config, const ConcavityParams& params,
                                  double lambda1) {
    HypothesisReport hyp;
    hyp.lambda1 = lambda1;
    hyp.j0_required = (config.mode == RunMode::BlowUp) || (params.alpha < 0.0);
    try {
        if (config.mode == RunMode::BlowUp)
            hyp.condition = check_blowup_condition(config.solver.source, params, lambda1,
                                                   config.condition_u_max,
                                                   config.condition_samples);
        else
            hyp.condition = check_global_condition(config.solver.source, params, lambda1,
                                                   config.condition_u_max,
                                                   config.condition_samples);
        hyp.params_ok = true;
    } catch (const Error& e) {
        if (e.code() != errc::param_violation) throw;
        hyp.params_ok = false;
        hyp.params_detail = e.what();
    }
    return hyp;
}

std::string condition_summary_csv(const HypothesisReport& hyp, double beta) {
    std::string out =
        "mode,holds,holds_asymptotically,worst_margin,worst_u,samples,u_max,leading_power,"
        "leading_coeff,lambda1,beta\n";
    const ConditionReport& c = hyp.condition;
    out += std::string(c.mode == ConditionMode::BlowUp ? "blow-up" : "global") + "," +
           (c.holds ? "1" : "0") + "," + (c.holds_asymptotically ? "1" : "0") + "," +
           num17(c.worst_margin) + "," + num17(c.worst_u) + "," + std::to_string(c.samples) +
           "," + num17(c.u_max) + "," + num17(c.leading_power) + "," + num17(c.leading_coeff) +
           "," + num17(hyp.lambda1) + "," + num17(beta) + "\n";
    return out;
}

}  // namespace

Field bump_field(const GridPtr& grid, double scale) {
    Field u(grid);
    const DomainSpec& spec = grid->spec;
    const std::size_t dims = static_cast<std::size_t>(spec.dims());
    for (std::size_t node = 0; node < grid->total; ++node) {
        double v = scale;
        std::size_t rest = node;
        for (std::size_t d = 0; d < dims; ++d) {
            const std::size_t i = rest / grid->stride[d];
            rest %= grid->stride[d];
            const double a = spec.extents[d][0], b = spec.extents[d][1];
            v *= std::sin(std::numbers::pi * (grid->coords[d][i] - a) / (b - a));
        }
        u.values[node] = v;
    }
    return u;
}

void write_field_csv(const Field& field, const std::string& path) {
    const GridPtr& grid = field.grid;
    const DomainSpec& spec = grid->spec;
    const std::size_t dims = static_cast<std::size_t>(spec.dims());
    std::string out;
    for (std::size_t d = 0; d < dims; ++d) out += axis_name(spec, d) + ",";
    out += "value\n";
    for (std::size_t node = 0; node < grid->total; ++node) {
        std::size_t rest = node;
        for (std::size_t d = 0; d < dims; ++d) {
            const std::size_t i = rest / grid->stride[d];
            rest %= grid->stride[d];
            out += num17(grid->coords[d][i]) + ",";
        }
        out += num17(field.values[node]) + "\n";
    }
    write_text(path, out);
}

Field read_field_csv(const GridPtr& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open field file " + path);
    const std::size_t dims = static_cast<std::size_t>(grid->spec.dims());
    std::string line;
    if (!std::getline(in, line)) fail(errc::io_error, path + ": empty file");
    Field u(grid);
    std::size_t node = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (node >= grid->total)
            fail(errc::validation_error, path + ": more rows than grid nodes");
        std::istringstream row(line);
        std::string cell;
        for (std::size_t d = 0; d < dims; ++d) {
            if (!std::getline(row, cell, ','))
                fail(errc::validation_error, path + ": short row " + std::to_string(node));
            const double x = std::strtod(cell.c_str(), nullptr);
            const double expect =
                grid->coords[d][(node / grid->stride[d]) % grid->coords[d].size()];
            if (std::fabs(x - expect) > 1e-9 * (1.0 + std::fabs(expect)))
                fail(errc::validation_error,
                     path + ": row " + std::to_string(node) + " coordinate " +
                         std::to_string(d) + " does not match the configured grid");
        }
        if (!std::getline(row, cell, ','))
            fail(errc::validation_error, path + ": missing value in row " + std::to_string(node));
        u.values[node] = std::strtod(cell.c_str(), nullptr);
        ++node;
    }
    if (node != grid->total)
        fail(errc::validation_error, path + ": expected " + std::to_string(grid->total) +
                                         " rows, got " + std::to_string(node));
    return u;
}

double find_positive_j0_scale(const Field& phi, const SparseOperator& op,
                              const SourceModel& source, double ell, double theta,
                              double headroom) {
    Field scaled(phi.grid);
    auto j_at = [&](double c) {
        for (std::size_t i = 0; i < phi.values.size(); ++i) scaled.values[i] = c * phi.values[i];
        return compute_J(scaled, op, source, ell, theta);
    };
    double hi = 1.0;
    int budget = 0;
    while (j_at(hi) <= 0.0) {
        hi *= 2.0;
        if (++budget > 200)
            fail(errc::invalid_initial_data,
                 "no scale with positive J0 found (source too weak against the gradient term)");
    }
    double lo = hi * 0.5;
    budget = 0;
    while (j_at(lo) > 0.0) {
        lo *= 0.5;
        if (++budget > 400)
            fail(errc::invalid_initial_data, "J0 is positive for every scale; no root to bracket");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (j_at(mid) > 0.0 ? hi : lo) = mid;
    }
    const double c = hi * (1.0 + headroom);
    if (!(j_at(c) > 0.0))
        fail(errc::invalid_initial_data,
             "scale " + num17(c) + " does not give positive J0; widen the headroom");
    return c;
}

Field make_initial_field(const RunConfig& config, const GridPtr& grid, const SparseOperator& op,
                         const Field* eigenfield) {
    const InitialData& init = config.solver.initial;
    switch (init.kind) {
        case InitialData::Kind::Bump:
            return bump_field(grid, init.scale);
        case InitialData::Kind::File:
            return read_field_csv(grid, init.path);
        case InitialData::Kind::Eigenfield: {
            if (!eigenfield)
                fail(errc::invalid_initial_data, "eigenfield initial data needs a spectral solve");
            double c = init.scale;
            if (init.j0_headroom >= 0.0)
                c = find_positive_j0_scale(*eigenfield, op, config.solver.source,
                                           config.solver.ell, config.params.theta,
                                           init.j0_headroom);
            Field u = *eigenfield;
            for (double& v : u.values) v *= c;
            return u;
        }
    }
    fail(errc::invalid_initial_data, "unknown initial data kind");
}

int run_eigen(const RunConfig& config, std::ostream& out, const std::string& dump_matrix_path) {
    const SpectralSetup s = spectral_setup(config);
    ensure_dir(config.output_dir);

    out << "lambda1=" << num17(s.eig.lambda1) << "\n"
        << "residual=" << num17(s.eig.residual) << "\n"
        << "iterations=" << s.eig.iterations << "\n"
        << "homogeneous_dimension=" << num17(homogeneous_dimension(config.domain)) << "\n";

    const PoincareReport poincare =
        verify_poincare(s.op, s.grid, s.eig.lambda1, config.poincare_trials, config.seed);
    out << "poincare_trials=" << poincare.trials << "\n"
        << "poincare_min_quotient=" << num17(poincare.min_quotient) << "\n"
        << "poincare_margin=" << num17(poincare.margin) << "\n";

    if (config.write_csv) {
        const std::string path = config.output_dir + "/eigenfield.csv";
        write_field_csv(s.eig.eigenfield, path);
        out << "eigenfield_csv=" << path << "\n";
    }
    if (!dump_matrix_path.empty()) {
        std::ofstream dump(dump_matrix_path, std::ios::binary);
        if (!dump) fail(errc::io_error, "cannot open " + dump_matrix_path);
        dump_coordinate(s.op, dump);
        out << "matrix_dump=" << dump_matrix_path << "\n";
    }
    if (!config.gamma_sweep.empty()) {
        std::string csv = "gamma,lambda1,residual,iterations\n";
        for (double g : config.gamma_sweep) {
            DomainSpec spec = config.domain;
            spec.gamma = g;
            const GridPtr grid = build_grid(spec);
            const SparseOperator op = assemble(*grid);
            EigenOptions opts;
            opts.tol = config.eigen_tol;
            opts.max_iter = config.eigen_max_iter;
            const EigenResult eig = smallest_eigenvalue(op, grid, opts);
            csv += num17(g) + "," + num17(eig.lambda1) + "," + num17(eig.residual) + "," +
                   std::to_string(eig.iterations) + "\n";
        }
        const std::string path = config.output_dir + "/eigen_sweep.csv";
        write_text(path, csv);
        out << "sweep_csv=" << path << "\n";
    }
    return exit_code::ok;
}

int run_check_conditions(const RunConfig& config, std::ostream& out) {
    if (config.mode == RunMode::SimulateOnly) {
        out << "error=check-conditions needs mode blow-up or global\n";
        return exit_code::config_error;
    }
    const SpectralSetup s = spectral_setup(config);
    const ConcavityParams params = resolved_params(config, s.eig.lambda1);
    const HypothesisReport hyp = build_hypothesis(config, params, s.eig.lambda1);

    out << "lambda1=" << num17(s.eig.lambda1) << "\n";
    out << "beta=" << num17(params.beta) << "\n";
    if (!hyp.params_ok) {
        out << "params_ok=0\nparams_detail=" << hyp.params_detail << "\n";
        return exit_code::hypothesis_failed;
    }
    out << "params_ok=1\n" << hyp.condition.to_kv();

    ensure_dir(config.output_dir);
    write_text(config.output_dir + "/summary.csv", condition_summary_csv(hyp, params.beta));
    out << "summary_csv=" << config.output_dir << "/summary.csv\n";

    return (hyp.condition.holds && hyp.condition.holds_asymptotically)
               ? exit_code::ok
               : exit_code::hypothesis_failed;
}

namespace {

// Shared by simulate and certify: run the stepper while appending trace rows.
RunSummary run_with_trace(const RunConfig& config, const SpectralSetup& s, Field u0,
                          Trace& trace) {
    SolverState state = make_state(config.solver, std::move(u0));
    return run(state, s.op, config.solver,
               [&](const SolverState& st, double dt) { append_row(trace, st, dt, s.op); });
}

}  // namespace

int run_simulate(const RunConfig& config, std::ostream& out,
                 const std::string& final_field_path) {
    const bool need_eigen = config.solver.initial.kind == InitialData::Kind::Eigenfield;
    const GridPtr grid = build_grid(config.domain);
    SpectralSetup s;
    s.grid = grid;
    s.op = assemble(*grid);
    const Field* phi = nullptr;
    if (need_eigen) {
        EigenOptions opts;
        opts.tol = config.eigen_tol;
        opts.max_iter = config.eigen_max_iter;
        s.eig = smallest_eigenvalue(s.op, s.grid, opts);
        phi = &s.eig.eigenfield;
    }

    Field u0 = make_initial_field(config, grid, s.op, phi);
    Trace trace = make_trace(RunMode::SimulateOnly, config.solver.ell, config.params.theta,
                             config.params.alpha, config.solver.source);

    SolverState state = make_state(config.solver, std::move(u0));
    const double mass0 = state.mass;
    const RunSummary summary = run(state, s.op, config.solver, [&](const SolverState& st, double dt) {
        append_row(trace, st, dt, s.op);
    });

    out << "outcome=" << outcome_name(summary.outcome) << "\n"
        << "t_final=" << num17(summary.t_final) << "\n"
        << "steps=" << summary.steps << "\n"
        << "max_u_final=" << num17(summary.max_u_final) << "\n"
        << "mass0=" << num17(mass0) << "\n"
        << "mass_final=" << num17(summary.mass_final) << "\n";

    ensure_dir(config.output_dir);
    if (config.write_csv) {
        const std::string path = config.output_dir + "/trace.csv";
        write_trace_csv(trace, path);
        out << "trace_csv=" << path << "\n";
    }
    if (!final_field_path.empty()) {
        write_field_csv(state.u, final_field_path);
        out << "final_field_csv=" << final_field_path << "\n";
    }

    switch (summary.outcome) {
        case Outcome::BlowupDetected: return exit_code::blowup_detected;
        case Outcome::StepUnderflow: return exit_code::step_underflow;
        case Outcome::ReachedHorizon: return exit_code::ok;
    }
    return exit_code::internal_error;
}

int run_certify(const RunConfig& config, std::ostream& out) {
    if (config.mode == RunMode::SimulateOnly) {
        out << "error=certify needs mode blow-up or global\n";
        return exit_code::config_error;
    }
    const SpectralSetup s = spectral_setup(config);
    const ConcavityParams params = resolved_params(config, s.eig.lambda1);
    HypothesisReport hyp = build_hypothesis(config, params, s.eig.lambda1);
    ensure_dir(config.output_dir);

    const std::string kv_path = config.output_dir + "/certificate.txt";
    const std::string json_path = config.output_dir + "/certificate.json";

    Field u0 = make_initial_field(config, s.grid, s.op, &s.eig.eigenfield);
    hyp.j0 = compute_J(u0, s.op, config.solver.source, config.solver.ell, params.theta);
    hyp.mass0 = compute_mass(u0, config.solver.ell);

    const bool gate = hyp.params_ok && hyp.condition.holds && hyp.condition.holds_asymptotically &&
                      (!hyp.j0_required || hyp.j0 > 0.0);
    if (!gate) {
        const Certificate cert = hypothesis_certificate(config.mode, hyp);
        write_certificate(cert, kv_path, json_path);
        out << cert.to_kv();
        out << "certificate_txt=" << kv_path << "\ncertificate_json=" << json_path << "\n";
        return exit_code::hypothesis_failed;
    }

    std::optional<ConcavityConstants> constants;
    if (config.mode == RunMode::BlowUp)
        constants = concavity_constants(params, hyp.j0, hyp.mass0);

    Trace trace = make_trace(config.mode, config.solver.ell, params.theta, params.alpha,
                             config.solver.source, constants);
    const RunSummary summary = run_with_trace(config, s, std::move(u0), trace);
    const Certificate cert = certify(trace, config.mode, hyp, summary, config.tolerances);

    if (config.write_csv) {
        const std::string path = config.output_dir + "/trace.csv";
        write_trace_csv(trace, path);
        out << "trace_csv=" << path << "\n";
    }
    write_certificate(cert, kv_path, json_path);
    out << cert.to_kv();
    out << "certificate_txt=" << kv_path << "\ncertificate_json=" << json_path << "\n";

    return cert.verdict == Verdict::Pass ? exit_code::ok : exit_code::certificate_failed;
}

int run_convergence(const RunConfig& config, std::ostream& out) {
    if (config.convergence_nodes.empty()) {
        out << "error=config has no convergence.nodes list\n";
        return exit_code::config_error;
    }
    const bool flat = config.domain.gamma == 0.0;
    std::string csv = "n,h,lambda1,residual,iterations,err_closed_form,err_continuum,ratio\n";
    double prev_err = std::numeric_limits<double>::quiet_NaN();
    double prev_lambda = std::numeric_limits<double>::quiet_NaN();
    double prev_diff = std::numeric_limits<double>::quiet_NaN();
    for (int n : config.convergence_nodes) {
        DomainSpec spec = config.domain;
        for (int& v : spec.nodes) v = n;
        const GridPtr grid = build_grid(spec);
        const SparseOperator op = assemble(*grid);
        EigenOptions opts;
        opts.tol = config.eigen_tol;
        opts.max_iter = config.eigen_max_iter;
        const EigenResult eig = smallest_eigenvalue(op, grid, opts);

        double err_closed = std::numeric_limits<double>::quiet_NaN();
        double err_cont = std::numeric_limits<double>::quiet_NaN();
        if (flat) {
            double closed = 0.0, cont = 0.0;
            for (std::size_t d = 0; d < grid->spacing.size(); ++d) {
                const double h = grid->spacing[d];
                const double L = spec.extents[d][1] - spec.extents[d][0];
                const double s = std::sin(std::numbers::pi * h / (2.0 * L));
                closed += 4.0 / (h * h) * s * s;
                cont += std::numbers::pi * std::numbers::pi / (L * L);
            }
            err_closed = eig.lambda1 - closed;
            err_cont = eig.lambda1 - cont;
        }
        double ratio = std::numeric_limits<double>::quiet_NaN();
        if (flat && !std::isnan(prev_err) && err_cont != 0.0)
            ratio = std::fabs(prev_err) / std::fabs(err_cont);
        else if (!flat && !std::isnan(prev_diff)) {
            const double diff = eig.lambda1 - prev_lambda;
            if (diff != 0.0) ratio = std::fabs(prev_diff) / std::fabs(diff);
        }
        if (!std::isnan(prev_lambda)) prev_diff = eig.lambda1 - prev_lambda;
        prev_lambda = eig.lambda1;
        prev_err = err_cont;

        const double h_min = *std::min_element(grid->spacing.begin(), grid->spacing.end());
        csv += std::to_string(n) + "," + num17(h_min) + "," + num17(eig.lambda1) + "," +
               num17(eig.residual) + "," + std::to_string(eig.iterations) + "," +
               num17(err_closed) + "," + num17(err_cont) + "," + num17(ratio) + "\n";
    }
    ensure_dir(config.output_dir);
    const std::string path = config.output_dir + "/convergence.csv";
    write_text(path, csv);
    out << "convergence_csv=" << path << "\n";
    return exit_code::ok;
}

int list_presets(std::ostream& out) {
    for (const std::string& name : preset_names()) out << name << "\n";
    return exit_code::ok;
}

}  // namespace grushin
