#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torreg/distributions.hpp"
#include "torreg/geometry.hpp"
#include "torreg/model.hpp"
#include "torreg/random.hpp"

namespace torreg {

using ParamVector = std::array<double, 6>;

/// Box for (phi0, b1, b2, b3, b4, theta0). The angle entries only define the
/// range restarts are drawn from: during optimization the two angles are
/// treated as periodic coordinates and the result is wrapped afterwards.
struct ParamBounds {
  ParamVector lower{0.0, -20.0, -20.0, -20.0, -20.0, 0.0};
  ParamVector upper{kTwoPi, 20.0, 20.0, 20.0, 20.0, kTwoPi};
};

struct FitConfig {
  std::size_t restarts = 64;
  ParamBounds bounds;
  double gradient_step = 1e-6;
  double tolerance = 1e-10;
  int max_iterations = 500;
  RngSeed seed{0};
  TorusGeometry geometry;
  unsigned threads = 0;  // 0: hardware concurrency
  // Extra starting points tried before the `restarts` random ones.
  std::vector<ModelParams> initial_guesses;
  // Restarts per refit in bootstrap_se.
  std::size_t bootstrap_restarts = 8;
};

void validate(const FitConfig& config);

struct StartRecord {
  ParamVector initial{};
  ParamVector final_params{};
  double final_loss = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool used_fallback = false;  // line search failed and the simplex method finished
  bool valid = false;          // final point outside the guard bands with finite loss
};

struct FitResult {
  ModelParams params;
  double loss = 0.0;
  double loss_torus = 0.0;
  double loss_sphere = 0.0;
  std::size_t best_start = 0;
  std::vector<StartRecord> starts;
  std::optional<ParamVector> standard_errors;
  std::chrono::duration<double> wall_time{0.0};
};

// Central differences with step h, coordinates in to_array() order.
ParamVector numerical_gradient(const std::function<double(const ModelParams&)>& objective,
                               const ModelParams& params, double h);

// Moves a point lying inside a guard band radially to the nearer band edge
// at distance 2 * kModulusGuard from the unit circle. Other points are
// returned unchanged.
ParamVector project_guard_band(ParamVector x) noexcept;

/// Multi-start minimization of the combined loss. Start k (after any initial
/// guesses) is drawn from derive_seed(config.seed, k), so results do not
/// depend on the thread count and adding restarts never raises the loss.
/// Throws PreconditionError when the data has fewer than 3 rows and
/// EstimationError when no start ends at a valid point.
FitResult fit(const Dataset& data, const FitConfig& config);

/// Nonparametric bootstrap: `replicates` row-resampled refits, each using
/// config.bootstrap_restarts random starts plus the full-data estimate.
/// Angles are summarized by the circular standard deviation sqrt(-2 ln Rbar),
/// the b's by the ordinary sample standard deviation. Refits that fail are
/// excluded; their count is stored in *failures when given.
ParamVector bootstrap_se(const Dataset& data, const FitConfig& config, std::size_t replicates,
                         std::size_t* failures = nullptr);

struct McSummary {
  ModelParams truth;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::size_t failures = 0;
  // For the angles, mean = truth + mean of the signed wrapped deviations, so
  // estimates straddling 0 average sensibly and may print as negative.
  ParamVector mean{};
  ParamVector sd{};
  ParamVector se{};  // sd / sqrt(successful replications)
  std::vector<ParamVector> estimates;
  std::vector<double> losses;
  std::chrono::duration<double> wall_time{0.0};
};

/// Replication r simulates covariates, errors and the fit from sub-streams
/// 0, 1, 2 of derive_seed(config.seed, r). Replications run in parallel;
/// each fit is single-threaded.
McSummary monte_carlo_study(const ModelParams& truth, const CovariateSpec& covariates,
                            const ErrorSpec& errors, std::size_t n, std::size_t replications,
                            const FitConfig& config);

}  // namespace torreg
