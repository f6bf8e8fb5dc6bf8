#include "grushin/grid.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace grushin {

void validate_domain(const DomainSpec& spec) {
    if (spec.m < 1 || spec.k < 1)
        fail(errc::bad_dimension, "need m >= 1 and k >= 1, got m=" + std::to_string(spec.m) +
                                      " k=" + std::to_string(spec.k));
    if (spec.m + spec.k > 3)
        fail(errc::bad_dimension, "m + k must be <= 3, got " + std::to_string(spec.m + spec.k));
    const std::size_t dims = static_cast<std::size_t>(spec.dims());
    if (spec.extents.size() != dims)
        fail(errc::bad_dimension, "expected " + std::to_string(dims) + " extents, got " +
                                      std::to_string(spec.extents.size()));
    if (spec.nodes.size() != dims)
        fail(errc::bad_dimension, "expected " + std::to_string(dims) + " node counts, got " +
                                      std::to_string(spec.nodes.size()));
    if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma))
        fail(errc::bad_gamma, "gamma must be finite and >= 0, got " + std::to_string(spec.gamma));
    for (std::size_t d = 0; d < dims; ++d) {
        const double a = spec.extents[d][0], b = spec.extents[d][1];
        if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
            fail(errc::bad_extent, "axis " + std::to_string(d) + ": need a < b, got [" +
                                       std::to_string(a) + ", " + std::to_string(b) + "]");
        if (spec.nodes[d] < 1)
            fail(errc::bad_extent,
                 "axis " + std::to_string(d) + ": need at least 1 interior node");
    }
    // With a single x-axis the coefficient |x|^(2 gamma) vanishes on the line
    // x = 0; a box straddling it splits into two pieces that no admissible
    // path connects, so we reject it outright.  0 on the boundary is fine.
    if (spec.m == 1) {
        const double a = spec.extents[0][0], b = spec.extents[0][1];
        if (a < 0.0 && 0.0 < b)
            fail(errc::domain_split,
                 "x-interval (" + std::to_string(a) + ", " + std::to_string(b) +
                     ") strictly contains 0; shift the box or use m >= 2");
    }
}

GridPtr build_grid(const DomainSpec& spec) {
    validate_domain(spec);
    auto grid = std::make_shared<Grid>();
    grid->spec = spec;
    const std::size_t dims = static_cast<std::size_t>(spec.dims());
    grid->spacing.resize(dims);
    grid->coords.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        const double a = spec.extents[d][0], b = spec.extents[d][1];
        const int n = spec.nodes[d];
        const double h = (b - a) / static_cast<double>(n + 1);
        grid->spacing[d] = h;
        grid->coords[d].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            grid->coords[d][static_cast<std::size_t>(i)] = a + static_cast<double>(i + 1) * h;
    }
    grid->stride.assign(dims, 1);
    for (std::size_t d = dims; d-- > 1;)
        grid->stride[d - 1] = grid->stride[d] * static_cast<std::size_t>(spec.nodes[d]);
    grid->total = grid->stride[0] * static_cast<std::size_t>(spec.nodes[0]);
    grid->cell_volume = 1.0;
    for (std::size_t d = 0; d < dims; ++d) grid->cell_volume *= grid->spacing[d];
    return grid;
}

std::size_t Grid::flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t d = 0; d < idx.size(); ++d)
        f += static_cast<std::size_t>(idx[d]) * stride[d];
    return f;
}

std::vector<int> Grid::unflat(std::size_t flat_index) const {
    std::vector<int> idx(stride.size());
    for (std::size_t d = 0; d < stride.size(); ++d) {
        idx[d] = static_cast<int>(flat_index / stride[d]);
        flat_index %= stride[d];
    }
    return idx;
}

double Grid::x_norm(std::size_t flat_index) const {
    const int m = spec.m;
    if (m == 1) {
        const std::size_t i = flat_index / stride[0] % coords[0].size();
        return std::fabs(coords[0][i]);
    }
    double sum = 0.0;
    for (int d = 0; d < m; ++d) {
        const std::size_t i =
            flat_index / stride[static_cast<std::size_t>(d)] % coords[static_cast<std::size_t>(d)].size();
        const double x = coords[static_cast<std::size_t>(d)][i];
        sum += x * x;
    }
    return std::sqrt(sum);
}

double homogeneous_dimension(const DomainSpec& spec) {
    return static_cast<double>(spec.m) + (1.0 + spec.gamma) * static_cast<double>(spec.k);
}

Field::Field(GridPtr g, double fill) : grid(std::move(g)), values(grid->total, fill) {}

Field::Field(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->total)
        fail(errc::dimension_mismatch, "field has " + std::to_string(values.size()) +
                                           " values, grid has " + std::to_string(grid->total) +
                                           " nodes");
}

double max_value(const Field& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : f.values)
        if (v > m) m = v;
    return m;
}

double min_value(const Field& f) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : f.values)
        if (v < m) m = v;
    return m;
}

double integrate(const Field& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double v = f.values[i];
        if (!std::isfinite(v))
            fail(errc::non_finite, "integrate: node " + std::to_string(i) + " is not finite");
        sum += v;
    }
    return f.grid->cell_volume * sum;
}

double pow_real(double base, double exponent) {
    if (exponent == 0.0) return 1.0;  // matches the u^0 == 1 convention, also at u = 0
    if (exponent == 1.0) return base;
    if (exponent == 2.0) return base * base;
    if (exponent == 3.0) return base * base * base;
    if (exponent == 4.0) return (base * base) * (base * base);
    return std::pow(base, exponent);
}

double integrate_pow(const Field& f, double exponent) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double v = pow_real(f.values[i], exponent);
        if (!std::isfinite(v))
            fail(errc::non_finite, "integrate_pow: node " + std::to_string(i) + " is not finite");
        sum += v;
    }
    return f.grid->cell_volume * sum;
}

}  // namespace grushin
