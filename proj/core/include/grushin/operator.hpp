#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "grushin/grid.hpp"

namespace grushin {

// CSR matrix for the discrete operator A = sum_x d2/dx_d^2 + |x|^(2 gamma) sum_y d2/dy_d^2
// on interior nodes with homogeneous Dirichlet boundary values.  A has negative
// diagonal and nonnegative off-diagonal entries; -A is symmetric positive
// definite.  Column indices within each row are strictly ascending, which fixes
// the summation order of apply() and makes repeated runs bit-identical.
struct SparseOperator {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;  // size n+1
    std::vector<std::size_t> col;      // size nnz
    std::vector<double> val;           // size nnz
    double max_abs_diag = 0.0;         // max_i |A_ii|, used by the CFL rule
    double cell_volume = 0.0;          // copied from the grid for energy quadrature

    double diag(std::size_t row) const;
};

// Second differences get 1/h_d^2 per axis; the k trailing axes are additionally
// weighted by |x(node)|^(2 gamma) evaluated at the node, which depends only on
// the x-part and therefore lands identically on both orientations of an edge.
SparseOperator assemble(const Grid& grid);

// y = A x with the fixed CSR row order.
void apply(const SparseOperator& op, const std::vector<double>& x, std::vector<double>& y);
Field apply(const SparseOperator& op, const Field& x);

// Discrete energy integral |grad_gamma v|^2 = -cell_volume * v^T (A v); the
// summation-by-parts identity makes this equal to the edgewise forward-difference
// quadrature, so the result is clamped at 0 (rounding can produce -1e-300 on
// near-zero fields, never genuine negatives).
double grad_energy(const SparseOperator& op, const Field& v);

// Coordinate text dump, one "row col value" line per stored entry,
// 17 significant digits.
void dump_coordinate(const SparseOperator& op, std::ostream& out);

}  // namespace grushin
