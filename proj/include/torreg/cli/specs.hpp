#pragma once

#include <string>
#include <vector>

#include "torreg/distributions.hpp"
#include "torreg/mobius.hpp"

namespace torreg::cli {

// All spec strings use radians for locations.
//   params:      "phi0,b1,b2,b3,b4,theta0"
//   covariates:  "vm:mu,kappa" | "wc:mu,zeta"
//   errors:      "none" | "sine:k1,k2,k3" | "cosine:r1,r2,r3"
//                | "mixture:k1,k2,k3,r1,r2,r3,w"
// Error laws are centred at (0, 0). Parsers throw ParseError with a message
// naming the offending piece, and PreconditionError for out-of-domain values.

std::vector<double> parse_list(const std::string& text, const std::string& what);

ModelParams parse_params(const std::string& text);
CovariateSpec parse_covariate_spec(const std::string& text);
ErrorSpec parse_error_spec(const std::string& text);

std::string format_params(const ModelParams& p);
std::string format_covariate_spec(const CovariateSpec& s);
std::string format_error_spec(const ErrorSpec& s);

// Replaces the dependency parameter (k3, r3, or both for a mixture).
// NoError is returned unchanged.
ErrorSpec with_dependency(const ErrorSpec& s, double dependency);

}  // namespace torreg::cli
