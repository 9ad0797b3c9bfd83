#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace torreg::optim {

using Vector = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;

// Extra feasibility map applied after clamping to the box (e.g. pushing a
// point out of an excluded band). May be empty.
using Projection = std::function<void(std::span<double>)>;

/// Per-coordinate box; infinite entries mean "unbounded".
struct Box {
  Vector lower;
  Vector upper;

  static Box unbounded(std::size_t dim) {
    return {Vector(dim, -std::numeric_limits<double>::infinity()),
            Vector(dim, std::numeric_limits<double>::infinity())};
  }
  void clamp(std::span<double> x) const noexcept;
};

// (f(x + h e_i) - f(x - h e_i)) / (2h) for every coordinate.
Vector central_difference_gradient(const Objective& f, std::span<const double> x, double h);

enum class Method { lbfgsb, nelder_mead };

struct MinimizeResult {
  Vector x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  Method method = Method::lbfgsb;
  std::string message;
};

struct LbfgsbOptions {
  int memory = 10;
  int max_iterations = 500;
  // Stop when (f_k - f_{k+1}) <= ftol * max(|f_k|, |f_{k+1}|, 1).
  double ftol = 1e-10;
  // Stop when the projected gradient's largest component is <= pgtol.
  double pgtol = 1e-10;
  double gradient_step = 1e-6;
  // Switch to Nelder-Mead after this many failed line searches.
  int line_search_failures = 2;
};

/// Bounded limited-memory quasi-Newton minimization with finite-difference
/// gradients. Variables at a bound whose gradient pushes outward are frozen
/// for the iteration; the step follows the projected path
/// P(x + alpha d) with Armijo backtracking. Falls back to Nelder-Mead from
/// the current iterate when the line search keeps failing.
MinimizeResult minimize_lbfgsb(const Objective& f, Vector x0, const Box& box,
                               const Projection& project, const LbfgsbOptions& options);

struct NelderMeadOptions {
  int max_evaluations = 3000;
  double initial_step = 0.1;
  double ftol = 1e-12;
  double xtol = 1e-9;
};

MinimizeResult minimize_nelder_mead(const Objective& f, Vector x0, const Box& box,
                                    const Projection& project, const NelderMeadOptions& options);

}  // namespace torreg::optim
