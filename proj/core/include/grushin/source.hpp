#pragma once

#include <string>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

// f(u) = sum_i C_i * max(u, 0)^{p_i} with C_i > 0 and p_i >= 1.  An empty term
// list is the zero source, accepted for plain simulation runs; the theorem-mode
// checkers reject it because every statement assumes f > 0 on (0, inf).
struct PowerTerm {
    double coeff = 1.0;     // C_i
    double exponent = 1.0;  // p_i
};

struct SourceModel {
    std::vector<PowerTerm> terms;

    bool zero() const { return terms.empty(); }
};

void validate_source(const SourceModel& source);

double f_eval(const SourceModel& source, double u);

// sum_i C_i p_i U^{p_i - 1}: a Lipschitz bound for f on [0, U], used by the CFL rule.
double f_lipschitz(const SourceModel& source, double U);

double max_exponent(const SourceModel& source);  // p* = max p_i (1.0 for the zero source)

// F(u) = (2 ell / (ell + 1)) * integral_0^u s^{ell-1} f(s) ds, in closed form:
// (2 ell / (ell + 1)) * sum_i C_i u^{p_i + ell} / (p_i + ell) for u >= 0, 0 otherwise.
double F_eval(const SourceModel& source, double ell, double u);

// d/du F(u) = (2 ell / (ell + 1)) u^{ell-1} f(u), used by trace functionals.
double F_prime(const SourceModel& source, double ell, double u);

struct ConcavityParams {
    double ell = 1.0;    // diffusion exponent, >= 1
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 0.0;
};

// Admissibility against the spectral bound lambda1:
//   blow-up mode:  alpha > ell + 1, theta > 0, 0 < beta <= lambda1 (alpha - ell - 1)/(ell + 1)
//   global mode:   alpha <= 0,      theta >= 0,     beta >= lambda1 (alpha - ell - 1)/(ell + 1)
// Throws param_violation naming the failed constraint.
void validate_blowup_params(const ConcavityParams& params, double lambda1);
void validate_global_params(const ConcavityParams& params, double lambda1);

// The largest admissible beta in blow-up mode (the spectral cap).
double beta_cap(const ConcavityParams& params, double lambda1);

enum class ConditionMode { BlowUp, Global };

struct ConditionReport {
    ConditionMode mode = ConditionMode::BlowUp;
    bool holds = false;                 // inequality satisfied at every sample
    bool holds_asymptotically = false;  // symbolic verdict for u -> infinity
    double worst_margin = 0.0;  // max of g (blow-up, want <= 0) / min of g (global, want >= 0)
    double worst_u = 0.0;       // sample attaining the worst margin
    int samples = 0;
    double u_max = 0.0;
    double leading_power = 0.0;  // dominant power of g and its coefficient, for the tail story
    double leading_coeff = 0.0;

    std::string to_kv() const;  // flat "key=value" lines
};

// g(u) = alpha F(u) - u^ell f(u) - beta u^{2 ell} - alpha theta, sampled on a
// logarithmic grid of `samples` points in (0, u_max] (12 decades below u_max).
//   blow-up condition:  g(u) <= 0 for all u > 0
//   global condition:   g(u) >= 0 for all u > 0
// Blow-up tail verdict: the u^{p*+ell} coefficient comparison reduces to
// alpha <= (ell + 1)(p* + ell) / (2 ell).  Global tail verdict: sign of the
// leading nonzero coefficient of the power sum g.
ConditionReport check_blowup_condition(const SourceModel& source, const ConcavityParams& params,
                                       double lambda1, double u_max = 1e6, int samples = 400);
ConditionReport check_global_condition(const SourceModel& source, const ConcavityParams& params,
                                       double lambda1, double u_max = 1e6, int samples = 400);

struct ConcavityConstants {
    double sigma = 0.0;        // sqrt(2 ell alpha) / (ell + 1) - 1
    double M = 0.0;            // (1 + sigma)(1 + 1/sigma) mass0^2 / (alpha (ell+1) J0)
    double Tstar_bound = 0.0;  // M / (sigma mass0)
    double J0 = 0.0;
    double mass0 = 0.0;
};

// Throws non_positive_j0 / non_positive_sigma when the ingredients leave the
// concavity argument without force.
ConcavityConstants concavity_constants(const ConcavityParams& params, double J0, double mass0);

}  // namespace grushin
