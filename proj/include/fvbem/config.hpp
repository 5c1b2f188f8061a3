#ifndef FVBEM_CONFIG_HPP_
#define FVBEM_CONFIG_HPP_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fvbem/model.hpp"

namespace fvbem {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a user problem from `key = value` lines ('#' starts a comment).
///
///   name      = my_problem
///   domain    = square <cx> <cy> <halfwidth>
///             | rectangle <x0> <y0> <x1> <y1> [<nx> <ny>]
///             | lshape [<halfwidth>]
///   rescale   = <factor>              geometry is multiplied by the factor
///   A         = <expr>                isotropic diffusion, or A11/A12/A22
///   A_piecewise = true|false          sample A at triangle barycenters
///   b1, b2, r, f, u0 = <expr>         expressions in x1, x2
///   t0        = <expr>                may also use n1, n2
///   radiation = log | ainf
///   upwind    = none | full | steered
///   exact_u, exact_ue = <expr>        optional, enables error reporting
///
/// Missing coefficients default to zero except A (identity). Log-growth
/// radiation requires diam(domain) < 1 after rescaling.
ProblemSpec parse_problem_config(std::istream& in);
ProblemSpec load_problem_config(const std::string& path);

}  // namespace fvbem

#endif  // FVBEM_CONFIG_HPP_
