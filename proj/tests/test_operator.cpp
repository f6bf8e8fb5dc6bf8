#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/operator.hpp"

#include "support/oracles.hpp"

using grushin::DomainSpec;
using grushin::Field;
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

Field product_sine(const grushin::GridPtr& grid) {
    Field f(grid);
    for (std::size_t node = 0; node < grid->total; ++node) {
        const auto idx = grid->unflat(node);
        double v = 1.0;
        for (std::size_t d = 0; d < idx.size(); ++d) {
            const double a = grid->spec.extents[d][0], b = grid->spec.extents[d][1];
            const double x = grid->coords[d][static_cast<std::size_t>(idx[d])];
            v *= std::sin(std::numbers::pi * (x - a) / (b - a));
        }
        f.values[node] = v;
    }
    return f;
}

// The quadratic form -cellvol v^T A v rewritten as the forward-difference sum
// over all gaps (boundary gaps against the zero extension included), weighted
// per axis like the assembly is.  Shares no code with grad_energy.
double edge_energy(const grushin::Grid& grid, const SparseOperator& op, const Field& v) {
    (void)op;
    const auto& spec = grid.spec;
    const std::size_t dims = static_cast<std::size_t>(spec.dims());
    double total = 0.0;
    for (std::size_t node = 0; node < grid.total; ++node) {
        const auto idx = grid.unflat(node);
        const double w = grushin::pow_real(grid.x_norm(node), 2.0 * spec.gamma);
        for (std::size_t d = 0; d < dims; ++d) {
            const double inv_h2 = 1.0 / (grid.spacing[d] * grid.spacing[d]);
            const double coeff = d < static_cast<std::size_t>(spec.m) ? inv_h2 : w * inv_h2;
            // gap to the previous neighbor (or boundary) along axis d; the x-axis
            // coefficient is constant, and along a y-gap the x-part is identical
            // at both ends, so attributing each gap to its upper node is exact
            const double below =
                idx[d] > 0 ? v.values[node - grid.stride[d]] : 0.0;
            const double diff = v.values[node] - below;
            total += coeff * diff * diff;
            // the topmost node also owns its boundary gap above
            if (idx[d] + 1 == spec.nodes[d]) total += coeff * v.values[node] * v.values[node];
        }
    }
    return grid.cell_volume * total;
}

}  // namespace

TEST_CASE("gamma zero reduces to the five-point Laplacian entry for entry") {
    const auto grid = grushin::build_grid(square_gamma(0.0, 4, 5));
    const SparseOperator op = assemble(*grid);
    const double ih2x = 1.0 / (grid->spacing[0] * grid->spacing[0]);
    const double ih2y = 1.0 / (grid->spacing[1] * grid->spacing[1]);

    std::size_t nnz = 0;
    for (std::size_t node = 0; node < grid->total; ++node) {
        const auto idx = grid->unflat(node);
        for (std::size_t k = op.row_ptr[node]; k < op.row_ptr[node + 1]; ++k, ++nnz) {
            const std::size_t c = op.col[k];
            double expected;
            if (c == node)
                expected = -2.0 * ih2x - 2.0 * ih2y;
            else if (c + grid->stride[0] == node || c == node + grid->stride[0])
                expected = ih2x;
            else
                expected = ih2y;
            CHECK(op.val[k] == expected);  // exact, zero tolerance
        }
        // neighbor count: 1 diagonal + one per interior-facing side
        std::size_t expect_row = 1;
        if (idx[0] > 0) ++expect_row;
        if (idx[0] + 1 < 4) ++expect_row;
        if (idx[1] > 0) ++expect_row;
        if (idx[1] + 1 < 5) ++expect_row;
        CHECK(op.row_ptr[node + 1] - op.row_ptr[node] == expect_row);
    }
    CHECK(nnz == op.col.size());
    CHECK(op.max_abs_diag == 2.0 * ih2x + 2.0 * ih2y);
}

TEST_CASE("the assembled matrix is exactly symmetric for any gamma") {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 2;
    spec.gamma = 1.3;
    spec.extents = {{0.5, 1.5}, {-1.0, 1.0}, {0.0, 2.0}};
    spec.nodes = {3, 4, 5};
    const auto grid = grushin::build_grid(spec);
    const SparseOperator op = assemble(*grid);

    const Eigen::MatrixXd M = oracle::densify_neg(op);
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j)
            CHECK(M(i, j) == M(j, i));  // bitwise, not approximately
}

TEST_CASE("summation by parts: the quadratic form equals the gap-difference energy") {
    DomainSpec spec;
    spec.m = 1;
    spec.k = 1;
    spec.gamma = 1.2;
    spec.extents = {{0.25, 1.75}, {0.0, 1.0}};
    spec.nodes = {6, 7};
    const auto grid = grushin::build_grid(spec);
    const SparseOperator op = assemble(*grid);

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        Field v(grid);
        for (double& x : v.values) x = oracle::uniform_pm1(rng);
        const double lib = grad_energy(op, v);
        const double ref = edge_energy(*grid, op, v);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("grad_energy of the product-sine bump converges to its continuum value") {
    const double pi = std::numbers::pi;
    const double continuum = pi * pi / 2.0;  // integral |grad(sin sin)|^2 on the unit square
    double prev_err = 0.0;
    int level = 0;
    for (int n : {15, 31, 63}) {
        const auto grid = grushin::build_grid(square_gamma(0.0, n, n));
        const SparseOperator op = assemble(*grid);
        const double err = std::fabs(grad_energy(op, product_sine(grid)) - continuum);
        if (level++ > 0) CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err / continuum < 1e-2);
}

TEST_CASE("grad_energy clamps rounding negatives to zero on the zero field") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 5, 5));
    const SparseOperator op = assemble(*grid);
    Field z(grid, 0.0);
    CHECK(grad_energy(op, z) == 0.0);
}

TEST_CASE("matvec validates the vector length and keeps a fixed summation order") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 4, 4));
    const SparseOperator op = assemble(*grid);
    std::vector<double> bad(7, 1.0), out;
    CHECK(oracle::thrown_code([&] { apply(op, bad, out); }) == grushin::errc::dimension_mismatch);

    // two applications of the same input agree bitwise
    std::mt19937_64 rng(3);
    std::vector<double> x(op.n), y1, y2;
    for (double& v : x) v = oracle::uniform_pm1(rng);
    apply(op, x, y1);
    apply(op, x, y2);
    CHECK(y1 == y2);
}

TEST_CASE("the degeneracy weight scales y-couplings by |x|^(2 gamma) at the node") {
    const auto grid = grushin::build_grid(square_gamma(1.5, 4, 4));
    const SparseOperator op = assemble(*grid);
    const double ih2y = 1.0 / (grid->spacing[1] * grid->spacing[1]);
    for (std::size_t node = 0; node < grid->total; ++node) {
        const auto idx = grid->unflat(node);
        if (idx[1] + 1 >= 4) continue;
        const double x = grid->coords[0][static_cast<std::size_t>(idx[0])];
        const double w = std::pow(std::fabs(x), 3.0);  // 2 gamma = 3
        // locate the +y neighbor entry
        double found = 0.0;
        for (std::size_t k = op.row_ptr[node]; k < op.row_ptr[node + 1]; ++k)
            if (op.col[k] == node + grid->stride[1]) found = op.val[k];
        CHECK(found == doctest::Approx(w * ih2y).epsilon(1e-15));
    }
}

TEST_CASE("coordinate dump lists every stored entry with row-major rows") {
    const auto grid = grushin::build_grid(square_gamma(1.0, 2, 3));
    const SparseOperator op = assemble(*grid);
    std::ostringstream out;
    dump_coordinate(op, out);

    std::istringstream in(out.str());
    std::size_t row, col, count = 0;
    double val;
    std::size_t last_row = 0;
    while (in >> row >> col >> val) {
        CHECK(row >= last_row);  // rows emitted in order
        last_row = row;
        if (row == col) CHECK(val == op.diag(row));
        ++count;
    }
    CHECK(count == op.col.size());
}
