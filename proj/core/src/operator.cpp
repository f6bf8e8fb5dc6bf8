#include "grushin/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

namespace grushin {

namespace {

// |x|^(2 gamma) with the exponent-specific fast paths of pow_real; std::pow
// handles 0^0 = 1 (gamma = 0 reduces to the plain Laplacian even on the line x = 0).
double degeneracy_weight(double x_norm, double two_gamma) {
    return pow_real(x_norm, two_gamma);
}

}  // namespace

double SparseOperator::diag(std::size_t row) const {
    for (std::size_t k = row_ptr[row]; k < row_ptr[row + 1]; ++k)
        if (col[k] == row) return val[k];
    return 0.0;
}

SparseOperator assemble(const Grid& grid) {
    const DomainSpec& spec = grid.spec;
    const std::size_t dims = static_cast<std::size_t>(spec.dims());
    const double two_gamma = 2.0 * spec.gamma;

    std::vector<double> inv_h2(dims);
    for (std::size_t d = 0; d < dims; ++d) inv_h2[d] = 1.0 / (grid.spacing[d] * grid.spacing[d]);

    SparseOperator op;
    op.n = grid.total;
    op.cell_volume = grid.cell_volume;
    op.row_ptr.assign(grid.total + 1, 0);
    op.col.reserve(grid.total * (2 * dims + 1));
    op.val.reserve(grid.total * (2 * dims + 1));

    std::vector<int> idx(dims, 0);
    std::vector<std::pair<std::size_t, double>> entries;
    entries.reserve(2 * dims + 1);

    for (std::size_t node = 0; node < grid.total; ++node) {
        // weight of the y-couplings for this node's x-part
        const double w = degeneracy_weight(grid.x_norm(node), two_gamma);

        entries.clear();
        double diag = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double coeff = (d < static_cast<std::size_t>(spec.m)) ? inv_h2[d] : w * inv_h2[d];
            diag -= 2.0 * coeff;
            if (idx[d] > 0) entries.emplace_back(node - grid.stride[d], coeff);
            if (idx[d] + 1 < spec.nodes[d]) entries.emplace_back(node + grid.stride[d], coeff);
        }
        entries.emplace_back(node, diag);
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        for (const auto& [c, v] : entries) {
            op.col.push_back(c);
            op.val.push_back(v);
        }
        op.row_ptr[node + 1] = op.col.size();
        op.max_abs_diag = std::max(op.max_abs_diag, -diag);

        // advance the multi-index, last axis fastest
        for (std::size_t d = dims; d-- > 0;) {
            if (++idx[d] < spec.nodes[d]) break;
            idx[d] = 0;
        }
    }
    return op;
}

void apply(const SparseOperator& op, const std::vector<double>& x, std::vector<double>& y) {
    if (x.size() != op.n)
        fail(errc::dimension_mismatch, "apply: vector length " + std::to_string(x.size()) +
                                           " vs operator dimension " + std::to_string(op.n));
    y.resize(op.n);
    for (std::size_t i = 0; i < op.n; ++i) {
        double sum = 0.0;
        for (std::size_t k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k)
            sum += op.val[k] * x[op.col[k]];
        y[i] = sum;
    }
}

Field apply(const SparseOperator& op, const Field& x) {
    Field y(x.grid);
    apply(op, x.values, y.values);
    return y;
}

double grad_energy(const SparseOperator& op, const Field& v) {
    std::vector<double> av;
    apply(op, v.values, av);
    double dot = 0.0;
    for (std::size_t i = 0; i < op.n; ++i) dot += v.values[i] * av[i];
    const double energy = -op.cell_volume * dot;
    return energy > 0.0 ? energy : 0.0;
}

void dump_coordinate(const SparseOperator& op, std::ostream& out) {
    char line[96];
    for (std::size_t i = 0; i < op.n; ++i) {
        for (std::size_t k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k) {
            std::snprintf(line, sizeof line, "%zu %zu %.17g\n", i, op.col[k], op.val[k]);
            out << line;
        }
    }
}

}  // namespace grushin
