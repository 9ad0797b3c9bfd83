#include "torreg/kernels/loss_kernel.hpp"
#include "torreg/model.hpp"

namespace torreg::kernels {

PackedRows PackedRows::pack(std::span<const DataRow> rows) {
  PackedRows p;
  p.n = rows.size();
  p.padded = (p.n + kLaneWidth - 1) / kLaneWidth * kLaneWidth;
  p.covariates.reserve(p.n);
  p.responses.reserve(p.n);
  for (auto* v : {&p.z_re, &p.z_im, &p.w_re, &p.w_im, &p.u_re, &p.u_im, &p.v_re, &p.v_im}) {
    v->assign(p.padded, 0.0);
  }
  for (std::size_t i = 0; i < p.padded; ++i) {
    if (i >= p.n) {
      p.z_re[i] = p.w_re[i] = p.u_re[i] = p.v_re[i] = 1.0;
      continue;
    }
    const auto& row = rows[i];
    p.covariates.push_back(row.covariate);
    p.responses.push_back(row.response);
    p.z_re[i] = std::cos(row.covariate.phi.value());
    p.z_im[i] = std::sin(row.covariate.phi.value());
    p.w_re[i] = std::cos(row.covariate.theta.value());
    p.w_im[i] = std::sin(row.covariate.theta.value());
    p.u_re[i] = std::cos(row.response.phi.value());
    p.u_im[i] = std::sin(row.response.phi.value());
    p.v_re[i] = std::cos(row.response.theta.value());
    p.v_im[i] = std::sin(row.response.theta.value());
  }
  return p;
}

void loss_terms_scalar(const PackedRows& rows, const ModelParams& params, const TorusGeometry& geom,
                       std::span<double> torus, std::span<double> sphere) {
  for (std::size_t i = 0; i < rows.n; ++i) {
    const ResidualPair res = residual_pair(params, rows.covariates[i], rows.responses[i]);
    torus[i] = square_angle_torus(geom, res.psi) + square_angle_torus(geom, res.xi);
    sphere[i] = square_angle_sphere(res.sphere_deflection);
  }
  for (std::size_t i = rows.n; i < rows.padded; ++i) torus[i] = sphere[i] = 0.0;
}

}  // namespace torreg::kernels
