#include "torreg/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace torreg::optim {

void Box::clamp(std::span<double> x) const noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

Vector central_difference_gradient(const Objective& f, std::span<const double> x, double h) {
  Vector g(x.size());
  Vector probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

namespace {

double dot(const Vector& a, const Vector& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

class Counted {
 public:
  explicit Counted(const Objective& f) : f_(f) {}
  double operator()(std::span<const double> x) {
    ++count_;
    const double v = f_(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }
  int count() const noexcept { return count_; }

 private:
  const Objective& f_;
  int count_ = 0;
};

void feasible(Vector& x, const Box& box, const Projection& project) {
  box.clamp(x);
  if (project) project(x);
}

// Components that may move this iteration: not pinned at a bound by a
// gradient pointing out of the box.
std::vector<bool> free_set(const Vector& x, const Vector& g, const Box& box) {
  std::vector<bool> free(x.size(), true);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] <= box.lower[i] && g[i] > 0.0) || (x[i] >= box.upper[i] && g[i] < 0.0)) {
      free[i] = false;
    }
  }
  return free;
}

struct Pair {
  Vector s;
  Vector y;
  double rho;
};

// Two-loop recursion restricted to the free coordinates.
Vector lbfgs_direction(const Vector& g, const std::deque<Pair>& memory, const std::vector<bool>& free) {
  const std::size_t n = g.size();
  auto masked = [&](const Vector& v) {
    Vector m(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i] = free[i] ? v[i] : 0.0;
    return m;
  };
  Vector q = masked(g);
  std::vector<double> alpha(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    const Vector s = masked(memory[k].s);
    alpha[k] = memory[k].rho * dot(s, q);
    const Vector y = masked(memory[k].y);
    for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y[i];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const Vector y = masked(memory[k].y);
    const double beta = memory[k].rho * dot(y, q);
    const Vector s = masked(memory[k].s);
    for (std::size_t i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * s[i];
  }
  for (double& v : q) v = -v;
  return masked(q);
}

Vector projected_gradient(const Vector& g, const std::vector<bool>& free) {
  Vector pg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) pg[i] = free[i] ? g[i] : 0.0;
  return pg;
}

}  // namespace

MinimizeResult minimize_lbfgsb(const Objective& f, Vector x0, const Box& box,
                               const Projection& project, const LbfgsbOptions& options) {
  Counted fc(f);
  const Objective counted = [&fc](std::span<const double> x) { return fc(x); };
  MinimizeResult result;
  result.method = Method::lbfgsb;

  Vector x = std::move(x0);
  feasible(x, box, project);
  double fx = counted(x);
  Vector g = central_difference_gradient(counted, x, options.gradient_step);
  std::deque<Pair> memory;
  int failures = 0;
  bool fallback = false;

  for (; result.iterations < options.max_iterations; ++result.iterations) {
    const auto free = free_set(x, g, box);
    if (inf_norm(projected_gradient(g, free)) <= options.pgtol) {
      result.converged = true;
      result.message = "projected gradient below tolerance";
      break;
    }
    Vector d = lbfgs_direction(g, memory, free);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      d = projected_gradient(g, free);
      for (double& v : d) v = -v;
      slope = dot(g, d);
    }
    double alpha = memory.empty() ? std::min(1.0, 1.0 / std::max(inf_norm(d), 1e-300)) : 1.0;

    Vector trial(x.size());
    double ftrial = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * d[i];
      feasible(trial, box, project);
      Vector step(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) step[i] = trial[i] - x[i];
      const double decrease = dot(g, step);
      if (!(decrease < 0.0)) continue;
      ftrial = counted(trial);
      if (ftrial <= fx + 1e-4 * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      memory.clear();
      if (++failures >= options.line_search_failures) {
        fallback = true;
        break;
      }
      continue;
    }

    Vector gtrial = central_difference_gradient(counted, trial, options.gradient_step);
    Pair pair{Vector(x.size()), Vector(x.size()), 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      pair.s[i] = trial[i] - x[i];
      pair.y[i] = gtrial[i] - g[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-12 * std::sqrt(dot(pair.s, pair.s) * dot(pair.y, pair.y))) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }

    const double drop = fx - ftrial;
    x = std::move(trial);
    fx = ftrial;
    g = std::move(gtrial);
    if (drop <= options.ftol * std::max({std::abs(fx), std::abs(fx + drop), 1.0})) {
      result.converged = true;
      result.message = "relative reduction below tolerance";
      ++result.iterations;
      break;
    }
  }

  if (fallback) {
    NelderMeadOptions nm;
    nm.ftol = options.ftol;
    auto polished = minimize_nelder_mead(f, x, box, project, nm);
    polished.iterations += result.iterations;
    polished.evaluations += fc.count();
    if (!(polished.f <= fx)) {
      polished.x = x;
      polished.f = fx;
    }
    polished.message = "line search failed; " + polished.message;
    return polished;
  }
  if (!result.converged && result.message.empty()) result.message = "iteration limit reached";
  result.x = std::move(x);
  result.f = fx;
  result.evaluations = fc.count();
  return result;
}

MinimizeResult minimize_nelder_mead(const Objective& f, Vector x0, const Box& box,
                                    const Projection& project, const NelderMeadOptions& options) {
  Counted fc(f);
  const std::size_t n = x0.size();
  MinimizeResult result;
  result.method = Method::nelder_mead;

  std::vector<Vector> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  feasible(simplex[0], box, project);
  for (std::size_t i = 0; i < n; ++i) {
    auto& v = simplex[i + 1];
    v = simplex[0];
    const double step = options.initial_step * std::max(1.0, std::abs(v[i]));
    v[i] += step;
    feasible(v, box, project);
    if (v[i] == simplex[0][i]) {
      v[i] -= 2.0 * step;
      feasible(v, box, project);
    }
  }
  for (std::size_t i = 0; i <= n; ++i) values[i] = fc(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto point = [&](const Vector& centroid, const Vector& worst, double t) {
    Vector p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = centroid[k] + t * (worst[k] - centroid[k]);
    feasible(p, box, project);
    return p;
  };

  while (fc.count() < options.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
      }
    }
    if (values[worst] - values[best] <= options.ftol * std::max(1.0, std::abs(values[best])) &&
        spread <= options.xtol * std::max(1.0, inf_norm(simplex[best]))) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    Vector centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);
    }
    const Vector reflected = point(centroid, simplex[worst], -1.0);
    const double fr = fc(reflected);
    if (fr < values[best]) {
      const Vector expanded = point(centroid, simplex[worst], -2.0);
      const double fe = fc(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Vector contracted = point(centroid, outside ? reflected : simplex[worst], 0.5);
    const double fcn = fc(contracted);
    if (fcn < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fcn;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) {
        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
      }
      feasible(simplex[i], box, project);
      values[i] = fc(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.f = values[best];
  result.evaluations = fc.count();
  result.message = result.converged ? "simplex converged" : "evaluation limit reached";
  return result;
}

}  // namespace torreg::optim
