#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/operator.hpp"
#include "grushin/solver.hpp"
#include "grushin/spectral.hpp"

#include "support/oracles.hpp"

using grushin::DomainSpec;
using grushin::errc;
using grushin::Field;
using grushin::Outcome;
using grushin::SolverConfig;
using grushin::SolverState;
using grushin::SparseOperator;

namespace {

DomainSpec square_gamma(double gamma, int nx, int ny) {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 1;
    spec.gamma = gamma;
    spec.extents = {{0.0, 1.0}, {0.0, 1.0}};
    spec.nodes = {nx, ny};
    return spec;
}

Field bump(const grushin::GridPtr& grid, double scale) {
    Field f(grid);
    for (std::size_t node = 0; node < grid->total; ++node) {
        const auto idx = grid->unflat(node);
        double v = scale;
        for (std::size_t d = 0; d < idx.size(); ++d) {
            const double a = grid->spec.extents[d][0], b = grid->spec.extents[d][1];
            const double x = grid->coords[d][static_cast<std::size_t>(idx[d])];
            v *= std::sin(std::acos(-1.0) * (x - a) / (b - a));
        }
        f.values[node] = v;
    }
    return f;
}

}  // namespace

TEST_CASE("adaptive dt follows the stability formula") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 5, 5));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 2.0;
    config.source = {{grushin::PowerTerm{3.0, 2.0}}};
    config.cfl = 0.4;

    SolverState state = make_state(config, Field(grid, 1.5));
    const double U = 1.5;
    const double expected =
        0.4 / (2.0 * U * op.max_abs_diag + grushin::f_lipschitz(config.source, U));
    CHECK(adaptive_dt(state, op, config) == doctest::Approx(expected).epsilon(1e-15));

    // with ell = 1 and no source the step size is state independent
    SolverConfig lin;
    lin.ell = 1.0;
    lin.cfl = 0.5;
    SolverState s2 = make_state(lin, Field(grid, 42.0));
    CHECK(adaptive_dt(s2, op, lin) == doctest::Approx(0.5 / op.max_abs_diag).epsilon(1e-15));
}

TEST_CASE("a single-node quadratic-diffusion run reproduces the scalar recurrence bitwise") {
    DomainSpec spec = square_gamma(1.0, 1, 1);
    spec.extents = {{0.25, 0.75}, {0.0, 1.0}};  // node at x = 0.5, y = 0.5
    const auto grid = grushin::build_grid(spec);
    const SparseOperator op = assemble(*grid);

    // A is 1x1: a = -(2/hx^2 + |0.5|^2 * 2/hy^2)
    const double hx = grid->spacing[0], hy = grid->spacing[1];
    const double a = -(2.0 / (hx * hx) + 0.25 * 2.0 / (hy * hy));
    CHECK(op.diag(0) == a);

    SolverConfig config;
    config.ell = 2.0;
    config.cfl = 0.3;
    config.t_end = std::numeric_limits<double>::infinity();  // never clip

    SolverState state = make_state(config, Field(grid, 0.8));
    double u = 0.8;
    for (int n = 0; n < 50; ++n) {
        const double dt = 0.3 / (2.0 * u * (-a));  // the library formula, scalar form
        CHECK(adaptive_dt(state, op, config) == dt);
        step(state, op, config, dt);
        u = u + dt * (a * (u * u));
        CHECK(state.u.values[0] == u);  // bitwise: same operations in the same order
        CHECK(state.max_u == u);
    }
    CHECK(state.step_count == 50);
}

TEST_CASE("explicit steps preserve nonnegativity through a full run") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 9, 9));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.0;
    config.source = {{grushin::PowerTerm{1.0, 2.0}}};
    config.t_end = 0.02;
    config.cfl = 1.0;  // the positivity-critical corner of the stability window

    // start with a field that is zero on part of the grid
    Field u0 = bump(grid, 1.0);
    for (std::size_t i = 0; i < u0.values.size(); ++i)
        if (i % 3 == 0) u0.values[i] = 0.0;

    SolverState state = make_state(config, std::move(u0));
    double min_seen = 0.0;
    run(state, op, config, [&](const SolverState& s, double) {
        min_seen = std::min(min_seen, grushin::min_value(s.u));
    });
    CHECK(min_seen >= 0.0);
}

TEST_CASE("identical configurations give bitwise-identical trajectories") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 7, 7));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.5;
    config.source = {{grushin::PowerTerm{0.5, 2.0}}};
    config.t_end = 0.05;

    auto run_once = [&] {
        SolverState state = make_state(config, bump(grid, 1.2));
        run(state, op, config);
        return state;
    };
    const SolverState a = run_once();
    const SolverState b = run_once();
    CHECK(a.u.values == b.u.values);
    CHECK(a.mass == b.mass);
    CHECK(a.time_mass_integral == b.time_mass_integral);
    CHECK(a.dissipation_integral == b.dissipation_integral);
    CHECK(a.step_count == b.step_count);
}

TEST_CASE("initial data screening: negative, zero, and non-finite fields") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 4, 4));
    SolverConfig config;

    Field neg(grid, 1.0);
    neg.values[3] = -0.5;
    CHECK(oracle::thrown_code([&] { make_state(config, neg); }) == errc::invalid_initial_data);

    Field zero(grid, 0.0);
    CHECK(oracle::thrown_code([&] { make_state(config, zero); }) == errc::invalid_initial_data);

    Field nan(grid, 1.0);
    nan.values[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK(oracle::thrown_code([&] { make_state(config, nan); }) == errc::non_finite);
}

TEST_CASE("an oversized step trips the positivity guard") {
    const auto grid = grushin::build_grid(square_gamma(0.0, 5, 5));
    const SparseOperator op = assemble(*grid);
    SolverConfig config;
    config.ell = 1.0;

    // a spike realizes the worst case the CFL formula protects against:
    // u_new = 1 - dt |A_ii| at the spike, so 10x the stable step lands near -4
    Field spike(grid, 0.0);
    spike.values[grid->total / 2] = 1.0;
    SolverState state = make_state(config, std::move(spike));
    const double dt_safe = adaptive_dt(state, op, config);
    CHECK(oracle::thrown_code([&] { step(state, op, config, 10.0 * dt_safe); }) ==
          errc::positivity_lost);
}

TEST_CASE("blow-up detection fires for a supercritical source") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 7, 7));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.0;
    config.source = {{grushin::PowerTerm{1.0, 3.0}}};
    config.t_end = 10.0;
    config.u_blow = 100.0;

    SolverState state = make_state(config, bump(grid, 5.0));
    const auto summary = run(state, op, config);
    CHECK(summary.outcome == Outcome::BlowupDetected);
    CHECK(summary.t_final < 10.0);
    CHECK(summary.max_u_final >= 100.0);
    CHECK(summary.steps > 0);
}

TEST_CASE("step underflow is reported instead of stalling") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 7, 7));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.0;
    config.t_end = 10.0;
    config.dt_min = 1.0;  // far above any stable step on this grid

    SolverState state = make_state(config, bump(grid, 1.0));
    const auto summary = run(state, op, config);
    CHECK(summary.outcome == Outcome::StepUnderflow);
    CHECK(summary.steps == 0);
}

TEST_CASE("the final step lands exactly on the horizon") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 7, 7));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.0;
    config.t_end = 0.0371;  // not a multiple of the constant step

    SolverState state = make_state(config, bump(grid, 1.0));
    const auto summary = run(state, op, config);
    CHECK(summary.outcome == Outcome::ReachedHorizon);
    CHECK(state.t == config.t_end);  // exactly, not approximately
}

TEST_CASE("the observer sees t = 0, the sampling stride and the final state") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 5, 5));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.0;
    config.t_end = 0.01;
    config.sample_every = 7;

    SolverState state = make_state(config, bump(grid, 1.0));
    std::vector<long> seen;
    const auto summary = run(state, op, config, [&](const SolverState& s, double) {
        seen.push_back(s.step_count);
    });
    REQUIRE(!seen.empty());
    CHECK(seen.front() == 0);
    CHECK(seen.back() == summary.steps);  // final state always emitted exactly once
    for (std::size_t i = 1; i + 1 < seen.size(); ++i) CHECK(seen[i] == 7 * static_cast<long>(i));
    for (std::size_t i = 1; i < seen.size(); ++i) CHECK(seen[i] > seen[i - 1]);
}

TEST_CASE("mass and dissipation accumulators match independent recomputation") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 6, 6));
    const SparseOperator op = assemble(*grid);

    SolverConfig config;
    config.ell = 1.5;
    config.source = {{grushin::PowerTerm{1.0, 2.0}}};
    config.t_end = 0.02;
    config.sample_every = 1;

    struct Snap {
        double t, mass, time_mass, diss;
        std::vector<double> u;
    };
    std::vector<Snap> snaps;
    SolverState state = make_state(config, bump(grid, 1.0));
    run(state, op, config, [&](const SolverState& s, double) {
        snaps.push_back({s.t, s.mass, s.time_mass_integral, s.dissipation_integral, s.u.values});
    });
    REQUIRE(snaps.size() > 3);

    double trapezoid = 0.0, dissipation = 0.0;
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        const double dt = snaps[i].t - snaps[i - 1].t;
        trapezoid += 0.5 * dt * (snaps[i - 1].mass + snaps[i].mass);
        double cell_sum = 0.0;
        for (std::size_t j = 0; j < snaps[i].u.size(); ++j) {
            const double rate = (snaps[i].u[j] - snaps[i - 1].u[j]) / dt;
            cell_sum += grushin::pow_real(snaps[i - 1].u[j], config.ell - 1.0) * rate * rate;
        }
        dissipation += (2.0 * config.ell / (config.ell + 1.0)) * dt * grid->cell_volume * cell_sum;
        CHECK(snaps[i].mass ==
              doctest::Approx(grushin::integrate_pow(Field(grid, snaps[i].u), config.ell + 1.0))
                  .epsilon(1e-13));
    }
    CHECK(state.time_mass_integral == doctest::Approx(trapezoid).epsilon(1e-12));
    CHECK(state.dissipation_integral == doctest::Approx(dissipation).epsilon(1e-12));
}

TEST_CASE("halving the step halves the first-order error against the eigen decay") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 9, 9));
    const SparseOperator op = assemble(*grid);
    grushin::EigenOptions opts;
    opts.tol = 1e-12;
    const auto eig = grushin::smallest_eigenvalue(op, grid, opts);

    auto error_at = [&](double cfl) {
        SolverConfig config;
        config.ell = 1.0;
        config.t_end = 0.01;
        config.cfl = cfl;
        SolverState state = make_state(config, eig.eigenfield);
        run(state, op, config);
        const double decay = std::exp(-eig.lambda1 * config.t_end);
        double err = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < grid->total; ++i) {
            err = std::max(err, std::fabs(state.u.values[i] - decay * eig.eigenfield.values[i]));
            ref = std::max(ref, decay * eig.eigenfield.values[i]);
        }
        return err / ref;
    };

    const double e_coarse = error_at(0.5);
    const double e_fine = error_at(0.25);
    CHECK(e_coarse / e_fine > 1.7);
    CHECK(e_coarse / e_fine < 2.3);
}
