#include "torreg/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torreg/error.hpp"
#include "torreg/optim.hpp"
#include "torreg/parallel.hpp"

namespace torreg {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kBootstrapStream = 0xB0075;

void project_pair(double& re, double& im) noexcept {
  const double m = std::hypot(re, im);
  if (std::abs(m - 1.0) >= kModulusGuard) return;
  const double target = m < 1.0 ? 1.0 - 2.0 * kModulusGuard : 1.0 + 2.0 * kModulusGuard;
  if (m == 0.0) return;
  re *= target / m;
  im *= target / m;
}

optim::Box optimizer_box(const ParamBounds& b) {
  auto box = optim::Box::unbounded(6);
  for (std::size_t i = 1; i <= 4; ++i) {
    box.lower[i] = b.lower[i];
    box.upper[i] = b.upper[i];
  }
  return box;
}

ParamVector random_start(const ParamBounds& b, RngSeed seed) {
  Rng rng(seed);
  ParamVector x{};
  for (std::size_t i = 0; i < 6; ++i) x[i] = rng.uniform(b.lower[i], b.upper[i]);
  return project_guard_band(x);
}

ParamVector wrapped(ParamVector x) noexcept {
  x[0] = wrap_two_pi(x[0]);
  x[5] = wrap_two_pi(x[5]);
  return x;
}

StartRecord run_start(const LossEvaluator& prototype, const ParamVector& init, const FitConfig& config) {
  const LossEvaluator eval = prototype;
  const optim::Objective objective = [&eval](std::span<const double> x) {
    ParamVector a;
    std::copy(x.begin(), x.end(), a.begin());
    return eval.total(a);
  };
  const optim::Projection project = [](std::span<double> x) {
    project_pair(x[1], x[2]);
    project_pair(x[3], x[4]);
  };
  optim::LbfgsbOptions options;
  options.max_iterations = config.max_iterations;
  options.ftol = config.tolerance;
  options.gradient_step = config.gradient_step;

  StartRecord rec;
  rec.initial = init;
  const auto res = optim::minimize_lbfgsb(objective, {init.begin(), init.end()},
                                          optimizer_box(config.bounds), project, options);
  std::copy(res.x.begin(), res.x.end(), rec.final_params.begin());
  rec.final_params = wrapped(rec.final_params);
  rec.final_loss = eval.total(rec.final_params);
  rec.iterations = res.iterations;
  rec.evaluations = res.evaluations;
  rec.converged = res.converged;
  rec.used_fallback = res.method == optim::Method::nelder_mead;
  rec.valid = std::isfinite(rec.final_loss) &&
              params_valid(ModelParams::from_array(rec.final_params)).valid;
  return rec;
}

double circular_sd(const std::vector<double>& angles) {
  double c = 0.0, s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double rbar = std::hypot(c, s) / static_cast<double>(angles.size());
  if (rbar <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(-2.0 * std::log(std::min(1.0, rbar)));
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void validate(const FitConfig& config) {
  if (config.restarts == 0) {
    throw PreconditionError("fit: need at least one restart");
  }
  for (std::size_t i = 0; i < 6; ++i) {
    if (!(config.bounds.lower[i] < config.bounds.upper[i])) {
      throw PreconditionError(std::string("fit: empty bounds for ") + kParamNames[i]);
    }
  }
  if (!(config.gradient_step > 0.0)) throw PreconditionError("fit: gradient step must be positive");
  if (!(config.tolerance > 0.0)) throw PreconditionError("fit: tolerance must be positive");
  if (config.max_iterations <= 0) throw PreconditionError("fit: max_iterations must be positive");
}

ParamVector numerical_gradient(const std::function<double(const ModelParams&)>& objective,
                               const ModelParams& params, double h) {
  if (!(h > 0.0)) throw PreconditionError("numerical_gradient: step must be positive");
  const optim::Objective f = [&objective](std::span<const double> x) {
    ParamVector a;
    std::copy(x.begin(), x.end(), a.begin());
    return objective(ModelParams::from_array(a));
  };
  const auto x = params.to_array();
  const auto g = optim::central_difference_gradient(f, x, h);
  ParamVector out;
  std::copy(g.begin(), g.end(), out.begin());
  return out;
}

ParamVector project_guard_band(ParamVector x) noexcept {
  project_pair(x[1], x[2]);
  project_pair(x[3], x[4]);
  return x;
}

FitResult fit(const Dataset& data, const FitConfig& config) {
  if (data.size() < 3) throw PreconditionError("fit: need at least 3 observations");
  validate(config);
  const auto started = Clock::now();
  const LossEvaluator prototype(data, config.geometry);

  std::vector<ParamVector> inits;
  for (const auto& g : config.initial_guesses) inits.push_back(project_guard_band(g.to_array()));
  for (std::size_t k = 0; k < config.restarts; ++k) {
    inits.push_back(random_start(config.bounds, derive_seed(config.seed, k)));
  }

  FitResult result;
  result.starts.resize(inits.size());
  parallel_for(inits.size(), config.threads,
               [&](std::size_t k) { result.starts[k] = run_start(prototype, inits[k], config); });

  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < result.starts.size(); ++k) {
    const auto& s = result.starts[k];
    if (s.valid && (!best || s.final_loss < result.starts[*best].final_loss)) best = k;
  }
  if (!best) throw EstimationError("fit: no start reached a valid parameter point");

  result.best_start = *best;
  result.params = ModelParams::from_array(result.starts[*best].final_params);
  const auto parts = prototype.parts(result.params);
  result.loss = parts.total();
  result.loss_torus = parts.torus;
  result.loss_sphere = parts.sphere;
  result.wall_time = Clock::now() - started;
  return result;
}

ParamVector bootstrap_se(const Dataset& data, const FitConfig& config, std::size_t replicates,
                         std::size_t* failures) {
  if (replicates < 20) throw PreconditionError("bootstrap_se: need at least 20 replicates");
  const FitResult full = fit(data, config);

  std::vector<std::optional<ParamVector>> estimates(replicates);
  const std::size_t n = data.size();
  parallel_for(replicates, config.threads, [&](std::size_t b) {
    const RngSeed seed = derive_seed(derive_seed(config.seed, kBootstrapStream), b);
    Rng rng(derive_seed(seed, 0));
    Dataset resample;
    resample.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
      resample.rows.push_back(data.rows[j]);
    }
    FitConfig sub = config;
    sub.restarts = config.bootstrap_restarts;
    sub.seed = derive_seed(seed, 1);
    sub.threads = 1;
    sub.initial_guesses = {full.params};
    try {
      estimates[b] = fit(resample, sub).params.to_array();
    } catch (const EstimationError&) {
      estimates[b].reset();
    }
  });

  const auto ok = static_cast<std::size_t>(
      std::count_if(estimates.begin(), estimates.end(), [](const auto& e) { return e.has_value(); }));
  if (failures) *failures = replicates - ok;
  if (ok < 2) throw EstimationError("bootstrap_se: fewer than 2 refits succeeded");
  ParamVector se{};
  for (std::size_t p = 0; p < 6; ++p) {
    std::vector<double> column;
    for (const auto& e : estimates) {
      if (e) column.push_back((*e)[p]);
    }
    se[p] = (p == 0 || p == 5) ? circular_sd(column) : sample_sd(column);
  }
  return se;
}

McSummary monte_carlo_study(const ModelParams& truth, const CovariateSpec& covariates,
                            const ErrorSpec& errors, std::size_t n, std::size_t replications,
                            const FitConfig& config) {
  if (replications < 2) throw PreconditionError("monte_carlo_study: need at least 2 replications");
  if (n < 3) throw PreconditionError("monte_carlo_study: need n >= 3");
  if (const auto v = params_valid(truth); !v.valid) {
    throw PreconditionError("monte_carlo_study: invalid truth: " + v.diagnostic);
  }
  validate(config);
  const auto started = Clock::now();

  std::vector<std::optional<FitResult>> fits(replications);
  parallel_for(replications, config.threads, [&](std::size_t r) {
    const RngSeed seed = derive_seed(config.seed, r);
    const auto x = sample_covariates(covariates, n, derive_seed(seed, 0));
    const Dataset data = simulate_responses(truth, x, errors, derive_seed(seed, 1));
    FitConfig sub = config;
    sub.seed = derive_seed(seed, 2);
    sub.threads = 1;
    try {
      fits[r] = fit(data, sub);
    } catch (const EstimationError&) {
      fits[r].reset();
    }
  });

  McSummary out;
  out.truth = truth;
  out.n = n;
  out.replications = replications;
  const auto t = truth.to_array();
  std::array<std::vector<double>, 6> centered;
  for (const auto& f : fits) {
    if (!f) {
      ++out.failures;
      continue;
    }
    const auto e = f->params.to_array();
    out.estimates.push_back(e);
    out.losses.push_back(f->loss);
    for (std::size_t p = 0; p < 6; ++p) {
      const bool angle = p == 0 || p == 5;
      centered[p].push_back(angle ? wrap_signed(e[p] - t[p]) : e[p] - t[p]);
    }
  }
  const std::size_t ok = out.estimates.size();
  for (std::size_t p = 0; p < 6 && ok > 0; ++p) {
    double m = 0.0;
    for (double d : centered[p]) m += d;
    m /= static_cast<double>(ok);
    out.mean[p] = t[p] + m;
    out.sd[p] = sample_sd(centered[p]);
    out.se[p] = out.sd[p] / std::sqrt(static_cast<double>(ok));
  }
  out.wall_time = Clock::now() - started;
  return out;
}

}  // namespace torreg
