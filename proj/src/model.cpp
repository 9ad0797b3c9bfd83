#include "torreg/model.hpp"

#include "torreg/error.hpp"
#include "torreg/numeric.hpp"

namespace torreg {

Dataset simulate_responses(const ModelParams& params, std::span<const TorusPoint> covariates,
                           std::span<const TorusPoint> errors) {
  if (errors.size() != covariates.size()) {
    throw PreconditionError("simulate_responses: need one error per covariate");
  }
  Dataset out;
  out.rows.reserve(covariates.size());
  for (std::size_t i = 0; i < covariates.size(); ++i) {
    const TorusPoint mean = predict_mean(params, covariates[i]);
    out.rows.push_back({covariates[i], {mean.phi + errors[i].phi, mean.theta + errors[i].theta}});
  }
  return out;
}

Dataset simulate_responses(const ModelParams& params, std::span<const TorusPoint> covariates,
                           const ErrorSpec& errors, RngSeed seed) {
  const auto eps = sample_errors(errors, covariates.size(), seed);
  return simulate_responses(params, covariates, eps);
}

ResidualPair residual_pair(const ModelParams& params, const TorusPoint& covariate,
                           const TorusPoint& response) {
  const TorusPoint mean = predict_mean(params, covariate);
  return {angular_distance(response.phi, mean.phi), angular_distance(response.theta, mean.theta),
          great_circle_distance(response, mean)};
}

namespace {

kernels::LossParts evaluate_once(const ModelParams& params, const Dataset& data,
                                 const TorusGeometry& geom) {
  if (data.empty()) throw PreconditionError("loss requires at least one observation");
  return LossEvaluator(data, geom).parts(params);
}

}  // namespace

double loss_torus(const ModelParams& params, const Dataset& data, const TorusGeometry& geom) {
  return evaluate_once(params, data, geom).torus;
}

double loss_sphere(const ModelParams& params, const Dataset& data) {
  return evaluate_once(params, data, TorusGeometry{}).sphere;
}

double loss_total(const ModelParams& params, const Dataset& data, const TorusGeometry& geom) {
  return evaluate_once(params, data, geom).total();
}

LossEvaluator::LossEvaluator(const Dataset& data, const TorusGeometry& geom, kernels::Isa isa)
    : rows_(kernels::PackedRows::pack(data.rows)),
      geom_(geom),
      isa_(isa),
      torus_scratch_(rows_.padded),
      sphere_scratch_(rows_.padded) {
  if (data.empty()) throw PreconditionError("loss requires at least one observation");
}

kernels::LossParts LossEvaluator::parts(const ModelParams& params) const {
  kernels::loss_terms(isa_, rows_, params, geom_, torus_scratch_, sphere_scratch_);
  const auto n = static_cast<double>(rows_.n);
  const std::span<const double> t(torus_scratch_.data(), rows_.n);
  const std::span<const double> s(sphere_scratch_.data(), rows_.n);
  return {pairwise_sum(t) / n, pairwise_sum(s) / n};
}

}  // namespace torreg
