#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "torreg/distributions.hpp"
#include "torreg/geometry.hpp"
#include "torreg/kernels/loss_kernel.hpp"
#include "torreg/mobius.hpp"

namespace torreg {

struct DataRow {
  TorusPoint covariate;
  TorusPoint response;
};

/// Paired covariate/response observations. `labels` is either empty or holds
/// one label (typically a timestamp) per row.
struct Dataset {
  std::vector<DataRow> rows;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
};

/// Componentwise and normal-deflection residuals, each in [0, pi].
struct ResidualPair {
  double psi = 0.0;
  double xi = 0.0;
  double sphere_deflection = 0.0;
};

// response_i = predict_mean(covariate_i) + error_i (mod 2 pi).
Dataset simulate_responses(const ModelParams& params, std::span<const TorusPoint> covariates,
                           std::span<const TorusPoint> errors);

// Draws the errors from `errors` with `seed`, then as above.
Dataset simulate_responses(const ModelParams& params, std::span<const TorusPoint> covariates,
                           const ErrorSpec& errors, RngSeed seed);

ResidualPair residual_pair(const ModelParams& params, const TorusPoint& covariate,
                           const TorusPoint& response);

// Mean over rows of A_T(psi) + A_T(xi). Throws PreconditionError on an empty dataset.
double loss_torus(const ModelParams& params, const Dataset& data, const TorusGeometry& geom);

// Mean over rows of A_S(sphere deflection).
double loss_sphere(const ModelParams& params, const Dataset& data);

double loss_total(const ModelParams& params, const Dataset& data, const TorusGeometry& geom);

/// Packs a dataset once and evaluates the loss repeatedly, as the optimizer
/// does. Holds scratch buffers, so one instance must not be shared between
/// threads; copy it instead.
class LossEvaluator {
 public:
  LossEvaluator(const Dataset& data, const TorusGeometry& geom,
                kernels::Isa isa = kernels::active_isa());

  kernels::LossParts parts(const ModelParams& params) const;
  double total(const ModelParams& params) const { return parts(params).total(); }
  double total(const std::array<double, 6>& x) const { return total(ModelParams::from_array(x)); }

  std::size_t size() const noexcept { return rows_.n; }
  kernels::Isa isa() const noexcept { return isa_; }

 private:
  kernels::PackedRows rows_;
  TorusGeometry geom_;
  kernels::Isa isa_;
  mutable std::vector<double> torus_scratch_;
  mutable std::vector<double> sphere_scratch_;
};

}  // namespace torreg
