#include "grushin/solver.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace grushin {

const char* outcome_name(Outcome o) noexcept {
    switch (o) {
        case Outcome::ReachedHorizon: return "reached-horizon";
        case Outcome::BlowupDetected: return "blowup-detected";
        case Outcome::StepUnderflow: return "step-underflow";
    }
    return "?";
}

namespace {

double compute_mass_now(const Field& u, double ell) { return integrate_pow(u, ell + 1.0); }

}  // namespace

double adaptive_dt(const SolverState& state, const SparseOperator& op,
                   const SolverConfig& config) {
    const double U = std::max(state.max_u, 1e-30);
    const double diffusion_rate = config.ell * pow_real(U, config.ell - 1.0) * op.max_abs_diag;
    const double reaction_rate = f_lipschitz(config.source, U);
    return config.cfl / (diffusion_rate + reaction_rate);
}

void step(SolverState& state, const SparseOperator& op, const SolverConfig& config, double dt) {
    const double ell = config.ell;
    const std::size_t n = state.u.values.size();

    // w = u^ell, r = A w + f(u)
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = pow_real(state.u.values[i], ell);
    std::vector<double> r;
    apply(op, w, r);
    for (std::size_t i = 0; i < n; ++i) r[i] += f_eval(config.source, state.u.values[i]);

    const double neg_tol = 1e-12 * (1.0 + state.max_u);
    double diss_sum = 0.0;
    double new_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double old = state.u.values[i];
        double next = old + dt * r[i];
        if (next < 0.0) {
            if (next < -neg_tol)
                fail(errc::positivity_lost,
                     "node " + std::to_string(i) + " went to " + std::to_string(next) +
                         " at t=" + std::to_string(state.t) + "; dt exceeds the CFL bound");
            next = 0.0;  // rounding-level undershoot
        }
        if (!std::isfinite(next))
            fail(errc::non_finite, "node " + std::to_string(i) + " overflowed at t=" +
                                       std::to_string(state.t) + " before detection threshold");
        const double rate = (next - old) / dt;  // realized forward difference
        diss_sum += pow_real(old, ell - 1.0) * rate * rate;
        state.u.values[i] = next;
        if (next > new_max) new_max = next;
    }

    const double mass_old = state.mass;
    const double mass_new = compute_mass_now(state.u, ell);
    state.time_mass_integral += 0.5 * dt * (mass_old + mass_new);
    state.dissipation_integral +=
        (2.0 * ell / (ell + 1.0)) * dt * state.u.grid->cell_volume * diss_sum;
    state.mass = mass_new;
    state.max_u = new_max;
    state.t += dt;
    ++state.step_count;
}

SolverState make_state(const SolverConfig& config, Field u0) {
    for (std::size_t i = 0; i < u0.values.size(); ++i) {
        const double v = u0.values[i];
        if (!std::isfinite(v))
            fail(errc::non_finite, "initial data: node " + std::to_string(i) + " is not finite");
        if (v < 0.0)
            fail(errc::invalid_initial_data,
                 "initial data must be nonnegative; node " + std::to_string(i) + " is " +
                     std::to_string(v));
    }
    SolverState state;
    state.max_u = max_value(u0);
    if (!(state.max_u > 0.0))
        fail(errc::invalid_initial_data, "initial data is identically zero");
    state.u = std::move(u0);
    state.mass = compute_mass_now(state.u, config.ell);
    return state;
}

RunSummary run(SolverState& state, const SparseOperator& op, const SolverConfig& config,
               const StepObserver& observe) {
    if (observe) observe(state, 0.0);

    RunSummary summary;
    long steps_since_sample = 0;
    double dt_last = 0.0;
    bool sampled_current = true;

    auto finish = [&](Outcome outcome) {
        summary.outcome = outcome;
        summary.t_final = state.t;
        summary.steps = state.step_count;
        summary.max_u_final = state.max_u;
        summary.mass_final = state.mass;
        if (observe && !sampled_current) observe(state, dt_last);
        return summary;
    };

    while (state.t < config.t_end) {
        const double dt_formula = adaptive_dt(state, op, config);
        if (dt_formula < config.dt_min) return finish(Outcome::StepUnderflow);
        const bool clipped = state.t + dt_formula >= config.t_end;
        const double dt = clipped ? config.t_end - state.t : dt_formula;

        step(state, op, config, dt);
        if (clipped) state.t = config.t_end;  // land exactly, avoid a trailing micro-step
        dt_last = dt;
        sampled_current = false;

        if (++steps_since_sample >= config.sample_every) {
            steps_since_sample = 0;
            if (observe) observe(state, dt);
            sampled_current = true;
        }
        if (state.max_u >= config.u_blow) return finish(Outcome::BlowupDetected);
    }
    return finish(Outcome::ReachedHorizon);
}

}  // namespace grushin
