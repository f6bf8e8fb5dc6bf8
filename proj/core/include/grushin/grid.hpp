#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

// Axis-aligned box in R^m x R^k discretized by interior tensor-product nodes.
// The first m axes are the "x" directions (the ones whose distance to the
// x-origin weights the remaining k "y" directions by |x|^(2*gamma)).
struct DomainSpec {
    int m = 1;
    int k = 1;
    double gamma = 0.0;
    std::vector<std::array<double, 2>> extents;  // size m+k, {a_d, b_d} with a_d < b_d
    std::vector<int> nodes;                      // size m+k, interior nodes per axis (>= 1)

    int dims() const { return m + k; }
};

// Throws Error on the first violated requirement:
//   bad_dimension  m < 1, k < 1 or m+k > 3, or extents/nodes of wrong length
//   bad_gamma      gamma < 0
//   bad_extent     some a_d >= b_d, or nodes[d] < 1
//   domain_split   m == 1 and the x-interval strictly contains 0 (the
//                  degeneracy line would cut the box into two components)
void validate_domain(const DomainSpec& spec);

struct Grid {
    DomainSpec spec;
    std::vector<double> spacing;               // h_d = (b_d - a_d) / (n_d + 1)
    std::vector<std::vector<double>> coords;   // coords[d][i] = a_d + (i+1) h_d
    std::vector<std::size_t> stride;           // row-major: last axis fastest
    std::size_t total = 0;                     // product of nodes[d]
    double cell_volume = 0.0;                  // product of h_d

    std::size_t flat(const std::vector<int>& idx) const;
    std::vector<int> unflat(std::size_t flat_index) const;

    // Euclidean norm of the x-part (first m coordinates) of a node.
    double x_norm(std::size_t flat_index) const;
};

using GridPtr = std::shared_ptr<const Grid>;

// Validates the spec, then derives spacings, coordinates and strides.
GridPtr build_grid(const DomainSpec& spec);

// Q = m + (1 + gamma) k, the scaling dimension of the anisotropic dilations.
double homogeneous_dimension(const DomainSpec& spec);

// One scalar value per interior node, flat row-major order.
struct Field {
    GridPtr grid;
    std::vector<double> values;

    Field() = default;
    Field(GridPtr g, double fill = 0.0);
    Field(GridPtr g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

double max_value(const Field& f);
double min_value(const Field& f);

// cell_volume * sum of node values; throws non_finite if any value is not finite.
double integrate(const Field& f);

// Convenience: integrate pow(f, e) nodewise (same quadrature, same error rules).
double integrate_pow(const Field& f, double exponent);

// pow with fast paths for the small integer exponents the solver hits hot.
double pow_real(double base, double exponent);

}  // namespace grushin
