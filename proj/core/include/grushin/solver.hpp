#pragma once

#include <functional>
#include <string>

#include "grushin/operator.hpp"
#include "grushin/source.hpp"

namespace grushin {

// How the start field is produced; resolved outside the stepper (the
// eigenfield variant needs a spectral solve first).
struct InitialData {
    enum class Kind { Eigenfield, Bump, File };
    Kind kind = Kind::Bump;
    double scale = 1.0;        // multiplier for eigenfield / bump
    double j0_headroom = -1.0; // >= 0: pick scale by root-finding so J0 > 0 with this headroom
    std::string path;          // node-value CSV for Kind::File
};

struct SolverConfig {
    double ell = 1.0;          // diffusion exponent (u_t = Lap_gamma u^ell + f(u)), >= 1
    SourceModel source;
    double t_end = 1.0;
    double cfl = 0.5;          // in (0, 1]
    double u_blow = 1e8;       // detection threshold for max u
    double dt_min = 1e-14;     // below this the formula dt underflows -> stop
    int sample_every = 1;      // trace emission period in steps
    InitialData initial;
};

struct SolverState {
    double t = 0.0;
    Field u;
    long step_count = 0;
    double time_mass_integral = 0.0;   // trapezoid accumulation of integral u^{ell+1} dt
    double dissipation_integral = 0.0; // (2 ell/(ell+1)) sum dt cellvol sum u^{ell-1} ((u'-u)/dt)^2
    double mass = 0.0;                 // current integral u^{ell+1} (kept in sync by step)
    double max_u = 0.0;                // current max of u
};

enum class Outcome { ReachedHorizon, BlowupDetected, StepUnderflow };

const char* outcome_name(Outcome o) noexcept;

struct RunSummary {
    Outcome outcome = Outcome::ReachedHorizon;
    double t_final = 0.0;   // horizon, detection time, or underflow time
    long steps = 0;
    double max_u_final = 0.0;
    double mass_final = 0.0;
};

// dt = cfl / (ell U^{ell-1} D_max + L_f(U)) with U = max(max u, 1e-30) and
// D_max = max |A_ii|; keeps the explicit update sign-preserving and stable.
double adaptive_dt(const SolverState& state, const SparseOperator& op, const SolverConfig& config);

// One explicit Euler step u := u + dt (A u^ell + f(u)); updates t, step_count,
// mass, max_u and both integral accumulators.  Throws non_finite on overflow
// and positivity_lost if dt violated the CFL precondition badly enough to
// produce a genuinely negative value (rounding-level negatives are clamped to 0).
void step(SolverState& state, const SparseOperator& op, const SolverConfig& config, double dt);

// Fresh state at t = 0.  Throws invalid_initial_data on negative entries or an
// identically-zero field.
SolverState make_state(const SolverConfig& config, Field u0);

// Called at t = 0, after every sample_every-th step, and after the final step;
// dt_last is 0 for the initial call.
using StepObserver = std::function<void(const SolverState& state, double dt_last)>;

// Advances until the horizon, blow-up detection (max u >= u_blow) or step
// underflow (formula dt < dt_min).  The final partial step is clipped to land
// exactly on t_end and is exempt from the underflow test.
RunSummary run(SolverState& state, const SparseOperator& op, const SolverConfig& config,
               const StepObserver& observe = {});

}  // namespace grushin
