#pragma once

#include <stdexcept>

namespace td {

// Parameters fixing one counter-example instance.
//
//  gamma    - ray-slope exponent: the ray with foot (-a,0) has slope a^gamma/2
//  beta     - amplitude of the target-density perturbation; choose_beta()
//             picks the conservative value 1/(2(M_zeta + M_eta)), beta = 0 is
//             the degenerate f+ = f- configuration
//  quad_tol - absolute tolerance handed to adaptive quadrature
//  root_tol - residual tolerance for scalar root solves
struct GammaConfig {
    double gamma    = 1.0;
    double beta     = 0.0;
    double quad_tol = 1e-9;
    double root_tol = 1e-12;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomain : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SingularJacobian : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct DegenerateDenominator : Error { using Error::Error; };
struct Unbalanced : Error { using Error::Error; };
struct SchemaMismatch : Error { using Error::Error; };

} // namespace td
