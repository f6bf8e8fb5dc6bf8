#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "grushin/grid.hpp"

#include "support/oracles.hpp"

using grushin::DomainSpec;
using grushin::errc;
using grushin::Field;

namespace {

DomainSpec unit_square(int nx, int ny) {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 1;
    spec.gamma = 0.0;
    spec.extents = {{0.0, 1.0}, {0.0, 1.0}};
    spec.nodes = {nx, ny};
    return spec;
}

}  // namespace

TEST_CASE("domain validation rejects each malformed spec with the matching category") {
    DomainSpec base = unit_square(4, 4);

    DomainSpec s = base;
    s.m = 0;
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_dimension);

    s = base;
    s.k = 0;
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_dimension);

    s = base;
    s.m = 2;
    s.k = 2;  // m + k = 4 > 3
    s.extents = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    s.nodes = {2, 2, 2, 2};
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_dimension);

    s = base;
    s.extents.pop_back();
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_dimension);

    s = base;
    s.gamma = -0.5;
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_gamma);

    s = base;
    s.extents[1] = {2.0, 2.0};  // empty interval
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_extent);

    s = base;
    s.nodes[0] = 0;
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::bad_extent);
}

TEST_CASE("a single x-axis must not strictly straddle the degeneracy line") {
    DomainSpec s = unit_square(4, 4);
    s.extents[0] = {-1.0, 1.0};
    CHECK(oracle::thrown_code([&] { validate_domain(s); }) == errc::domain_split);

    // touching zero at the boundary keeps one component
    s.extents[0] = {-1.0, 0.0};
    CHECK_NOTHROW(validate_domain(s));
    s.extents[0] = {0.0, 1.0};
    CHECK_NOTHROW(validate_domain(s));

    // with two x-axes the degeneracy set is a single point, no split
    DomainSpec s2;
    s2.m = 2;
    s2.k = 1;
    s2.gamma = 1.0;
    s2.extents = {{-1.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}};
    s2.nodes = {3, 3, 3};
    CHECK_NOTHROW(validate_domain(s2));
}

TEST_CASE("grid geometry: spacings, coordinates, strides, volume and indexing") {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 1;
    spec.gamma = 2.0;
    spec.extents = {{0.0, 1.0}, {-2.0, 3.0}};
    spec.nodes = {4, 9};
    const auto grid = grushin::build_grid(spec);

    CHECK(grid->spacing[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(grid->spacing[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(grid->coords[0][0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(grid->coords[0][3] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(grid->coords[1][0] == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(grid->coords[1][8] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(grid->stride == std::vector<std::size_t>{9, 1});
    CHECK(grid->total == 36);
    CHECK(grid->cell_volume == doctest::Approx(0.1).epsilon(1e-15));

    // flat index walks the last axis fastest and round-trips through unflat
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 9; ++j) {
            const std::size_t f = grid->flat({i, j});
            CHECK(f == static_cast<std::size_t>(i) * 9 + static_cast<std::size_t>(j));
            CHECK(grid->unflat(f) == std::vector<int>{i, j});
        }

    // the x-part norm ignores the y coordinate entirely
    CHECK(grid->x_norm(grid->flat({2, 0})) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(grid->x_norm(grid->flat({2, 8})) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("x_norm with two x-axes is the Euclidean norm of the x-part") {
    DomainSpec spec;
    spec.m = 2;
    spec.k = 1;
    spec.gamma = 1.0;
    spec.extents = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    spec.nodes = {3, 3, 3};
    const auto grid = grushin::build_grid(spec);
    const std::size_t node = grid->flat({1, 2, 0});  // x = (0.5, 0.75)
    CHECK(grid->x_norm(node) == doctest::Approx(std::sqrt(0.5 * 0.5 + 0.75 * 0.75)).epsilon(1e-15));
}

TEST_CASE("homogeneous dimension follows the anisotropic scaling") {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 2;
    spec.gamma = 0.5;
    spec.extents = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
    spec.nodes = {2, 2, 2};
    CHECK(grushin::homogeneous_dimension(spec) == doctest::Approx(4.0).epsilon(1e-15));
    spec.gamma = 0.0;
    CHECK(grushin::homogeneous_dimension(spec) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("integrate is linear and converges to the smooth integral") {
    const auto grid = grushin::build_grid(unit_square(63, 63));
    Field f(grid), g(grid);
    for (std::size_t node = 0; node < grid->total; ++node) {
        const auto idx = grid->unflat(node);
        const double x = grid->coords[0][static_cast<std::size_t>(idx[0])];
        const double y = grid->coords[1][static_cast<std::size_t>(idx[1])];
        f.values[node] = std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y);
        g.values[node] = x * y;
    }

    const double pi = std::numbers::pi;
    CHECK(grushin::integrate(f) == doctest::Approx(4.0 / (pi * pi)).epsilon(2e-3));

    Field combo(grid);
    for (std::size_t i = 0; i < grid->total; ++i)
        combo.values[i] = 2.0 * f.values[i] - 3.0 * g.values[i];
    CHECK(grushin::integrate(combo) ==
          doctest::Approx(2.0 * grushin::integrate(f) - 3.0 * grushin::integrate(g))
              .epsilon(1e-13));

    CHECK(grushin::integrate_pow(f, 2.0) ==
          doctest::Approx(0.25).epsilon(2e-3));  // integral sin^2 sin^2 = 1/4
}

TEST_CASE("integrate rejects non-finite node values") {
    const auto grid = grushin::build_grid(unit_square(3, 3));
    Field f(grid, 1.0);
    f.values[4] = std::numeric_limits<double>::quiet_NaN();
    CHECK(oracle::thrown_code([&] { grushin::integrate(f); }) == errc::non_finite);
    f.values[4] = std::numeric_limits<double>::infinity();
    CHECK(oracle::thrown_code([&] { grushin::integrate_pow(f, 2.0); }) == errc::non_finite);
}

TEST_CASE("field constructors enforce the grid size") {
    const auto grid = grushin::build_grid(unit_square(3, 3));
    CHECK(oracle::thrown_code([&] { Field f(grid, std::vector<double>(5, 1.0)); }) ==
          errc::dimension_mismatch);
    Field ok(grid, 2.5);
    CHECK(ok.size() == 9);
    CHECK(grushin::max_value(ok) == 2.5);
    CHECK(grushin::min_value(ok) == 2.5);
}

TEST_CASE("pow_real matches std::pow on fast paths and keeps the u^0 convention") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const double base = std::fabs(oracle::uniform_pm1(rng)) * 10.0;
        for (double e : {0.0, 1.0, 2.0, 3.0, 4.0, 2.5, 1.7}) {
            const double expected = std::pow(base, e);
            CHECK(grushin::pow_real(base, e) == doctest::Approx(expected).epsilon(1e-15));
        }
    }
    CHECK(grushin::pow_real(0.0, 0.0) == 1.0);
    CHECK(grushin::pow_real(0.0, 3.0) == 0.0);
}
