#pragma once

#include <cstdint>
#include <vector>

#include "grushin/grid.hpp"
#include "grushin/operator.hpp"

namespace grushin {

struct EigenOptions {
    double tol = 1e-10;        // relative change of the Rayleigh quotient AND residual bound
    int max_iter = 10000;      // outer inverse-iteration steps
    double inner_tol = 1e-12;  // relative residual of each CG solve
};

struct EigenResult {
    double lambda1 = 0.0;  // smallest eigenvalue of -A
    Field eigenfield;      // nonnegative, normalized to cell_volume * sum v^2 = 1
    double residual = 0.0; // ||(-A) v - lambda1 v||_2 / lambda1 with ||v||_2 = 1
    int iterations = 0;
};

// Inverse power iteration on -A starting from the all-ones vector; every inner
// system is solved by conjugate gradients.  Throws not_converged when max_iter
// is exhausted and not_positive_definite on CG breakdown.
EigenResult smallest_eigenvalue(const SparseOperator& op, const GridPtr& grid,
                                const EigenOptions& options = {});

// <(-A) v, v> / <v, v>; cell_volume cancels, so this is directly comparable to
// lambda1.  Throws zero_field on an identically-zero argument.
double rayleigh_quotient(const SparseOperator& op, const Field& v);

struct PoincareReport {
    int trials = 0;
    double lambda1 = 0.0;
    double min_quotient = 0.0;  // smallest quotient seen across all probes
    double margin = 0.0;        // min_quotient - lambda1
};

// Draws `trials` pseudo-random fields with components uniform in [-1, 1]
// (reproducible from `seed`) and asserts rayleigh_quotient >= lambda1 * (1 - 1e-9)
// for each.  Raw uniform draws average the whole spectrum and sit far above
// lambda1, so each trial also probes a low-mode-enriched copy (a few inverse
// iterations applied to the draw); those land just above lambda1 and give the
// bound real bite -- an inflated lambda1 is caught immediately.  Throws
// poincare_violated naming the offending trial.
PoincareReport verify_poincare(const SparseOperator& op, const GridPtr& grid, double lambda1,
                               int trials, std::uint64_t seed);

}  // namespace grushin
