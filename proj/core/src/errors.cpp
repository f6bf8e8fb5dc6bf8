#include "grushin/errors.hpp"

namespace grushin {

const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::domain_split: return "domain_split";
        case errc::bad_extent: return "bad_extent";
        case errc::bad_dimension: return "bad_dimension";
        case errc::bad_gamma: return "bad_gamma";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::non_finite: return "non_finite";
        case errc::zero_field: return "zero_field";
        case errc::not_converged: return "not_converged";
        case errc::not_positive_definite: return "not_positive_definite";
        case errc::poincare_violated: return "poincare_violated";
        case errc::param_violation: return "param_violation";
        case errc::non_positive_j0: return "non_positive_j0";
        case errc::non_positive_sigma: return "non_positive_sigma";
        case errc::invalid_initial_data: return "invalid_initial_data";
        case errc::positivity_lost: return "positivity_lost";
        case errc::incompatible_trace: return "incompatible_trace";
        case errc::schema_error: return "schema_error";
        case errc::validation_error: return "validation_error";
        case errc::io_error: return "io_error";
    }
    return "unknown_error";
}

}  // namespace grushin
