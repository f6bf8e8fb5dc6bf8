#pragma once

#include <stdexcept>
#include <string>

namespace grushin {

// Every failure the library can signal, so callers (and tests) can react to
// the category instead of parsing messages.
enum class errc {
    // domain / grid
    domain_split,        // 1-d x-interval straddles 0: the degenerate line would disconnect it
    bad_extent,          // extent with a >= b
    bad_dimension,       // m,k < 1 or m+k > 3
    bad_gamma,           // gamma < 0
    dimension_mismatch,  // field length does not match grid
    non_finite,          // NaN/Inf encountered in field data or during stepping
    // spectral
    zero_field,          // Rayleigh quotient of the zero vector
    not_converged,       // iteration budget exhausted
    not_positive_definite,  // CG breakdown: operator is not SPD
    poincare_violated,   // a sampled quotient fell below the claimed bound
    // source model / concavity constants
    param_violation,     // (ell, alpha, beta, theta) outside the admissible set
    non_positive_j0,
    non_positive_sigma,
    // solver
    invalid_initial_data,  // negative or identically-zero start field
    positivity_lost,       // step produced a genuinely negative value (CFL misuse)
    // diagnostics
    incompatible_trace,  // trace mode does not match the requested certificate
    // config / io
    schema_error,        // malformed document: wrong types, unknown keys
    validation_error,    // well-formed document with out-of-range values
    io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace grushin
