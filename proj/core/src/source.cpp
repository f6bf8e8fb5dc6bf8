#include "grushin/source.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "grushin/grid.hpp"  // pow_real

namespace grushin {

void validate_source(const SourceModel& source) {
    for (std::size_t i = 0; i < source.terms.size(); ++i) {
        const PowerTerm& t = source.terms[i];
        if (!(t.coeff > 0.0) || !std::isfinite(t.coeff))
            fail(errc::param_violation,
                 "source term " + std::to_string(i) + ": coefficient must be > 0");
        if (!(t.exponent >= 1.0) || !std::isfinite(t.exponent))
            fail(errc::param_violation,
                 "source term " + std::to_string(i) + ": exponent must be >= 1");
    }
}

double f_eval(const SourceModel& source, double u) {
    if (u <= 0.0) return 0.0;
    double s = 0.0;
    for (const PowerTerm& t : source.terms) s += t.coeff * pow_real(u, t.exponent);
    return s;
}

double f_lipschitz(const SourceModel& source, double U) {
    double s = 0.0;
    for (const PowerTerm& t : source.terms)
        s += t.coeff * t.exponent * pow_real(U, t.exponent - 1.0);
    return s;
}

double max_exponent(const SourceModel& source) {
    double p = 1.0;
    for (const PowerTerm& t : source.terms) p = std::max(p, t.exponent);
    return p;
}

double F_eval(const SourceModel& source, double ell, double u) {
    if (u <= 0.0) return 0.0;
    double s = 0.0;
    for (const PowerTerm& t : source.terms)
        s += t.coeff * pow_real(u, t.exponent + ell) / (t.exponent + ell);
    return (2.0 * ell / (ell + 1.0)) * s;
}

double F_prime(const SourceModel& source, double ell, double u) {
    if (u <= 0.0) return 0.0;
    return (2.0 * ell / (ell + 1.0)) * pow_real(u, ell - 1.0) * f_eval(source, u);
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) fail(errc::param_violation, what);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

double beta_cap(const ConcavityParams& params, double lambda1) {
    return lambda1 * (params.alpha - params.ell - 1.0) / (params.ell + 1.0);
}

void validate_blowup_params(const ConcavityParams& params, double lambda1) {
    require(params.ell >= 1.0, "ell must be >= 1, got " + num(params.ell));
    require(params.alpha > params.ell + 1.0, "blow-up mode needs alpha > ell + 1 = " +
                                                 num(params.ell + 1.0) + ", got alpha = " +
                                                 num(params.alpha));
    require(params.theta > 0.0, "blow-up mode needs theta > 0, got " + num(params.theta));
    const double cap = beta_cap(params, lambda1);
    require(params.beta > 0.0, "blow-up mode needs beta > 0, got " + num(params.beta));
    require(params.beta <= cap, "blow-up mode needs beta <= lambda1 (alpha-ell-1)/(ell+1) = " +
                                    num(cap) + ", got beta = " + num(params.beta));
}

void validate_global_params(const ConcavityParams& params, double lambda1) {
    require(params.ell >= 1.0, "ell must be >= 1, got " + num(params.ell));
    require(params.alpha <= 0.0, "global mode needs alpha <= 0, got " + num(params.alpha));
    require(params.theta >= 0.0, "global mode needs theta >= 0, got " + num(params.theta));
    const double floor = beta_cap(params, lambda1);
    require(params.beta >= floor, "global mode needs beta >= lambda1 (alpha-ell-1)/(ell+1) = " +
                                      num(floor) + ", got beta = " + num(params.beta));
}

namespace {

// g(u) = alpha F(u) - u^ell f(u) - beta u^{2 ell} - alpha theta
double condition_gap(const SourceModel& source, const ConcavityParams& params, double u) {
    return params.alpha * F_eval(source, params.ell, u) -
           pow_real(u, params.ell) * f_eval(source, u) -
           params.beta * pow_real(u, 2.0 * params.ell) - params.alpha * params.theta;
}

// Collect g as a power sum (power -> coefficient, exact-equal powers merged)
// and return the highest power with a nonzero coefficient.
std::pair<double, double> leading_term(const SourceModel& source, const ConcavityParams& params) {
    std::map<double, double> poly;
    const double ell = params.ell;
    for (const PowerTerm& t : source.terms) {
        const double factor =
            params.alpha * 2.0 * ell / ((ell + 1.0) * (t.exponent + ell)) - 1.0;
        poly[t.exponent + ell] += factor * t.coeff;
    }
    poly[2.0 * ell] += -params.beta;
    poly[0.0] += -params.alpha * params.theta;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        if (it->second != 0.0) return {it->first, it->second};
    return {0.0, 0.0};
}

ConditionReport sample_condition(const SourceModel& source, const ConcavityParams& params,
                                 ConditionMode mode, double u_max, int samples) {
    validate_source(source);
    if (source.zero())
        fail(errc::param_violation, "condition checks need a nonzero source (f > 0 on (0, inf))");
    require(u_max > 0.0, "u_max must be > 0");
    require(samples >= 2, "need at least 2 samples");

    ConditionReport report;
    report.mode = mode;
    report.samples = samples;
    report.u_max = u_max;

    // log-spaced over 12 decades up to u_max, endpoint included
    const double u_min = u_max * 1e-12;
    const double ratio = std::pow(u_min / u_max, 1.0 / static_cast<double>(samples - 1));
    const bool want_nonpositive = (mode == ConditionMode::BlowUp);
    bool first = true;
    for (int j = samples - 1; j >= 0; --j) {
        const double u = u_max * std::pow(ratio, static_cast<double>(j));
        const double g = condition_gap(source, params, u);
        const bool worse = first || (want_nonpositive ? g > report.worst_margin
                                                      : g < report.worst_margin);
        if (worse) {
            report.worst_margin = g;
            report.worst_u = u;
        }
        first = false;
    }
    report.holds = want_nonpositive ? (report.worst_margin <= 0.0) : (report.worst_margin >= 0.0);

    const auto [power, coeff] = leading_term(source, params);
    report.leading_power = power;
    report.leading_coeff = coeff;
    if (mode == ConditionMode::BlowUp) {
        // coefficient comparison at the top power p* + ell:
        // alpha * 2 ell C* / ((ell+1)(p*+ell)) <= C*
        const double ell = params.ell;
        const double pstar = max_exponent(source);
        report.holds_asymptotically = params.alpha <= (ell + 1.0) * (pstar + ell) / (2.0 * ell);
    } else {
        report.holds_asymptotically = coeff >= 0.0;
    }
    return report;
}

}  // namespace

ConditionReport check_blowup_condition(const SourceModel& source, const ConcavityParams& params,
                                       double lambda1, double u_max, int samples) {
    validate_blowup_params(params, lambda1);
    return sample_condition(source, params, ConditionMode::BlowUp, u_max, samples);
}

ConditionReport check_global_condition(const SourceModel& source, const ConcavityParams& params,
                                       double lambda1, double u_max, int samples) {
    validate_global_params(params, lambda1);
    return sample_condition(source, params, ConditionMode::Global, u_max, samples);
}

std::string ConditionReport::to_kv() const {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "mode=%s\nholds=%d\nholds_asymptotically=%d\nworst_margin=%.17g\n"
                  "worst_u=%.17g\nsamples=%d\nu_max=%.17g\nleading_power=%.17g\n"
                  "leading_coeff=%.17g\n",
                  mode == ConditionMode::BlowUp ? "blow-up" : "global", holds ? 1 : 0,
                  holds_asymptotically ? 1 : 0, worst_margin, worst_u, samples, u_max,
                  leading_power, leading_coeff);
    return buf;
}

ConcavityConstants concavity_constants(const ConcavityParams& params, double J0, double mass0) {
    const double ell = params.ell;
    require(ell >= 1.0, "ell must be >= 1");
    require(params.alpha > 0.0, "concavity constants need alpha > 0");
    require(mass0 > 0.0, "mass0 must be > 0");
    if (!(J0 > 0.0))
        fail(errc::non_positive_j0, "J0 = " + num(J0) + " must be > 0");
    const double sigma = std::sqrt(2.0 * ell * params.alpha) / (ell + 1.0) - 1.0;
    if (!(sigma > 0.0))
        fail(errc::non_positive_sigma,
             "sigma = sqrt(2 ell alpha)/(ell+1) - 1 = " + num(sigma) + " must be > 0");
    ConcavityConstants c;
    c.sigma = sigma;
    c.J0 = J0;
    c.mass0 = mass0;
    c.M = (1.0 + sigma) * (1.0 + 1.0 / sigma) * mass0 * mass0 /
          (params.alpha * (ell + 1.0) * J0);
    c.Tstar_bound = c.M / (sigma * mass0);
    return c;
}

}  // namespace grushin
