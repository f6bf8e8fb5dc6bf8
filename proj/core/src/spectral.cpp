#include "grushin/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace grushin {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void apply_neg(const SparseOperator& op, const std::vector<double>& x, std::vector<double>& y) {
    apply(op, x, y);
    for (double& v : y) v = -v;
}

// CG for (-A) x = b, relative residual <= tol.  x is overwritten (zero start).
// Breakdown p^T (-A) p <= 0 means the matrix is not SPD.
void cg_solve(const SparseOperator& op, const std::vector<double>& b, std::vector<double>& x,
              double tol) {
    const std::size_t n = op.n;
    x.assign(n, 0.0);
    std::vector<double> r = b, p = b, ap(n);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) return;
    double rr = dot(r, r);
    const std::size_t max_iter = 20 * n + 100;
    for (std::size_t it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= tol * bnorm) return;
        apply_neg(op, p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0))
            fail(errc::not_positive_definite,
                 "CG breakdown at iteration " + std::to_string(it) + ": p^T(-A)p = " + std::to_string(pap));
        const double alpha = rr / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    fail(errc::not_converged, "CG did not reach tol " + std::to_string(tol));
}

void normalize(std::vector<double>& v) {
    const double n = norm2(v);
    for (double& x : v) x /= n;
}

// Rayleigh quotient and Euclidean-relative residual of the unit vector v.
struct RQ {
    double lambda;
    double residual;
};

RQ rayleigh_and_residual(const SparseOperator& op, const std::vector<double>& v) {
    std::vector<double> av;
    apply_neg(op, v, av);
    const double lambda = dot(v, av);
    double res2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = av[i] - lambda * v[i];
        res2 += d * d;
    }
    return {lambda, std::sqrt(res2) / lambda};
}

// Deterministic uniform doubles in [-1, 1): the engine is fully specified by
// the standard, the bit extraction below avoids distribution objects whose
// output differs between standard libraries.
double uniform_pm1(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-52 - 1.0;
}

}  // namespace

double rayleigh_quotient(const SparseOperator& op, const Field& v) {
    double vv = 0.0;
    for (double x : v.values) vv += x * x;
    if (vv == 0.0) fail(errc::zero_field, "Rayleigh quotient of the zero field");
    std::vector<double> av;
    apply_neg(op, v.values, av);
    return dot(v.values, av) / vv;
}

EigenResult smallest_eigenvalue(const SparseOperator& op, const GridPtr& grid,
                                const EigenOptions& options) {
    if (op.n == 0) fail(errc::zero_field, "empty operator");
    std::vector<double> v(op.n, 1.0), w;
    normalize(v);

    double lambda_prev = 0.0;
    for (int it = 1; it <= options.max_iter; ++it) {
        cg_solve(op, v, w, options.inner_tol);
        normalize(w);
        v.swap(w);
        const RQ rq = rayleigh_and_residual(op, v);
        if (it > 1 && std::fabs(rq.lambda - lambda_prev) <= options.tol * rq.lambda &&
            rq.residual <= options.tol) {
            EigenResult result;
            result.lambda1 = rq.lambda;
            result.residual = rq.residual;
            result.iterations = it;
            // sign-fix (the ground mode has one sign), then switch from the
            // Euclidean to the discrete-L2 normalization
            double sum = 0.0;
            for (double x : v) sum += x;
            const double flip = (sum < 0.0) ? -1.0 : 1.0;
            const double scale = flip / std::sqrt(grid->cell_volume);
            for (double& x : v) x *= scale;
            result.eigenfield = Field(grid, std::move(v));
            return result;
        }
        lambda_prev = rq.lambda;
    }
    fail(errc::not_converged,
         "inverse iteration: no convergence within " + std::to_string(options.max_iter) + " steps");
}

PoincareReport verify_poincare(const SparseOperator& op, const GridPtr& grid, double lambda1,
                               int trials, std::uint64_t seed) {
    PoincareReport report;
    report.trials = trials;
    report.lambda1 = lambda1;
    report.min_quotient = std::numeric_limits<double>::infinity();
    const double bound = lambda1 * (1.0 - 1e-9);
    std::mt19937_64 rng(seed);
    Field probe(grid);
    std::vector<double> refined;
    for (int trial = 0; trial < trials; ++trial) {
        for (double& x : probe.values) x = uniform_pm1(rng);
        const double q_raw = rayleigh_quotient(op, probe);
        // pull the draw toward the bottom of the spectrum: three inverse
        // iterations leave a field whose quotient hugs lambda1 from above
        refined = probe.values;
        for (int s = 0; s < 3; ++s) {
            std::vector<double> rhs = refined;
            cg_solve(op, rhs, refined, 1e-10);
            normalize(refined);
        }
        const double q_ref = rayleigh_quotient(op, Field(grid, refined));
        for (double q : {q_raw, q_ref}) {
            if (q < report.min_quotient) report.min_quotient = q;
            if (q < bound)
                fail(errc::poincare_violated,
                     "trial " + std::to_string(trial) + " (seed " + std::to_string(seed) +
                         "): quotient " + std::to_string(q) + " < claimed bound " +
                         std::to_string(bound));
        }
    }
    if (trials == 0) report.min_quotient = lambda1;
    report.margin = report.min_quotient - lambda1;
    return report;
}

}  // namespace grushin
