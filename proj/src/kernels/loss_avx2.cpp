// Built with -mavx2 -mfma. Only reached through loss_terms() after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include "torreg/kernels/loss_kernel.hpp"

namespace torreg::kernels {

namespace {

// Cephes atan rational approximation on |x| <= 0.66.
constexpr double kP0 = -8.750608600031904122785e-1;
constexpr double kP1 = -1.615753718733365076637e1;
constexpr double kP2 = -7.500855792314704667340e1;
constexpr double kP3 = -1.228866684490136173410e2;
constexpr double kP4 = -6.485021904942025371773e1;
constexpr double kQ0 = 2.485846490142306297962e1;
constexpr double kQ1 = 1.650270098316988542046e2;
constexpr double kQ2 = 4.328810604912902668951e2;
constexpr double kQ3 = 4.853903996359136964868e2;
constexpr double kQ4 = 1.945506571482613964425e2;
constexpr double kMoreBits = 6.123233995736765886130e-17;

inline __m256d vabs(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// atan2(y, x) for y >= 0; result in [0, pi]. atan2(0, 0) = 0.
inline __m256d atan2_upper(__m256d y, __m256d x) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d ax = vabs(x);
  const __m256d hi = _mm256_max_pd(y, ax);
  const __m256d lo = _mm256_min_pd(y, ax);
  const __m256d hi_zero = _mm256_cmp_pd(hi, zero, _CMP_EQ_OQ);
  __m256d t = _mm256_div_pd(lo, _mm256_blendv_pd(hi, one, hi_zero));

  // Reduce (0.66, 1] to [-0.2, 0] via (t - 1) / (t + 1) + pi/4.
  const __m256d mid = _mm256_cmp_pd(t, _mm256_set1_pd(0.66), _CMP_GT_OQ);
  const __m256d reduced = _mm256_div_pd(_mm256_sub_pd(t, one), _mm256_add_pd(t, one));
  t = _mm256_blendv_pd(t, reduced, mid);

  const __m256d z = _mm256_mul_pd(t, t);
  __m256d p = _mm256_fmadd_pd(_mm256_set1_pd(kP0), z, _mm256_set1_pd(kP1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kP2));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kP3));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(kP4));
  __m256d q = _mm256_add_pd(z, _mm256_set1_pd(kQ0));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(kQ1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(kQ2));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(kQ3));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(kQ4));
  const __m256d ratio = _mm256_div_pd(_mm256_mul_pd(z, p), q);
  __m256d a = _mm256_fmadd_pd(t, ratio, t);
  const __m256d offset = _mm256_blendv_pd(
      zero, _mm256_set1_pd(0.25 * kPi + 0.5 * kMoreBits), mid);
  a = _mm256_add_pd(a, offset);

  // Undo the octant folding.
  const __m256d swapped = _mm256_cmp_pd(y, ax, _CMP_GT_OQ);
  a = _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(0.5 * kPi), a), swapped);
  const __m256d negx = _mm256_cmp_pd(x, zero, _CMP_LT_OQ);
  a = _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(kPi), a), negx);
  return a;
}

struct VComplex {
  __m256d re;
  __m256d im;
};

inline VComplex mul(VComplex a, VComplex b) {
  return {_mm256_fmsub_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmadd_pd(a.re, b.im, _mm256_mul_pd(a.im, b.re))};
}

// a * conj(b)
inline VComplex mul_conj(VComplex a, VComplex b) {
  return {_mm256_fmadd_pd(a.re, b.re, _mm256_mul_pd(a.im, b.im)),
          _mm256_fmsub_pd(a.im, b.re, _mm256_mul_pd(a.re, b.im))};
}

inline VComplex broadcast(std::complex<double> c) {
  return {_mm256_set1_pd(c.real()), _mm256_set1_pd(c.imag())};
}

inline VComplex normalized(VComplex a) {
  const __m256d inv = _mm256_div_pd(
      _mm256_set1_pd(1.0), _mm256_sqrt_pd(_mm256_fmadd_pd(a.re, a.re, _mm256_mul_pd(a.im, a.im))));
  return {_mm256_mul_pd(a.re, inv), _mm256_mul_pd(a.im, inv)};
}

// r * d * (R * d + r * sin d)
inline __m256d torus_square(__m256d d, __m256d sin_d, __m256d major, __m256d minor) {
  return _mm256_mul_pd(_mm256_mul_pd(minor, d), _mm256_fmadd_pd(major, d, _mm256_mul_pd(minor, sin_d)));
}

}  // namespace

void loss_terms_avx2(const PackedRows& rows, const ModelParams& params, const TorusGeometry& geom,
                     std::span<double> torus, std::span<double> sphere) {
  const VComplex beta0 = broadcast(params.beta0());
  const VComplex beta1 = broadcast(params.beta1());
  const VComplex beta1c = broadcast(std::conj(params.beta1()));
  const VComplex gamma0 = broadcast(params.gamma0());
  const VComplex gamma1 = broadcast(params.gamma1());
  const VComplex gamma1c = broadcast(std::conj(params.gamma1()));
  const __m256d major = _mm256_set1_pd(geom.major());
  const __m256d minor = _mm256_set1_pd(geom.minor());
  const __m256d half_pi = _mm256_set1_pd(0.5 * kPi);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  for (std::size_t i = 0; i < rows.padded; i += kLaneWidth) {
    const VComplex z{_mm256_loadu_pd(&rows.z_re[i]), _mm256_loadu_pd(&rows.z_im[i])};
    const VComplex w{_mm256_loadu_pd(&rows.w_re[i]), _mm256_loadu_pd(&rows.w_im[i])};
    const VComplex u{_mm256_loadu_pd(&rows.u_re[i]), _mm256_loadu_pd(&rows.u_im[i])};
    const VComplex v{_mm256_loadu_pd(&rows.v_re[i]), _mm256_loadu_pd(&rows.v_im[i])};

    // Since |f| = 1, arg(rot * num / den) = arg(rot * num * conj(den)): no division.
    const VComplex wb = mul(w, beta1);
    const VComplex bz = mul(beta1c, z);
    const VComplex num1{_mm256_add_pd(z.re, wb.re), _mm256_add_pd(z.im, wb.im)};
    const VComplex den1{_mm256_add_pd(w.re, bz.re), _mm256_add_pd(w.im, bz.im)};
    const VComplex c1 = normalized(mul(beta0, mul_conj(num1, den1)));

    const VComplex zg = mul(z, gamma1);
    const VComplex gw = mul(gamma1c, w);
    const VComplex num2{_mm256_add_pd(w.re, zg.re), _mm256_add_pd(w.im, zg.im)};
    const VComplex den2{_mm256_add_pd(z.re, gw.re), _mm256_add_pd(z.im, gw.im)};
    const VComplex c2 = normalized(mul(gamma0, mul_conj(num2, den2)));

    // Residual rotations u conj(c1), v conj(c2); |im| is the sine of the residual.
    const VComplex e1 = mul_conj(u, c1);
    const VComplex e2 = mul_conj(v, c2);
    const __m256d s1 = vabs(e1.im);
    const __m256d s2 = vabs(e2.im);
    const __m256d psi = atan2_upper(s1, e1.re);
    const __m256d xi = atan2_upper(s2, e2.re);
    const __m256d t = _mm256_add_pd(torus_square(psi, s1, major, minor),
                                    torus_square(xi, s2, major, minor));

    // Normals N = (cos p cos t, sin p cos t, sin t) at observed and fitted points.
    const __m256d nx = _mm256_mul_pd(u.re, v.re), ny = _mm256_mul_pd(u.im, v.re), nz = v.im;
    const __m256d mx = _mm256_mul_pd(c1.re, c2.re), my = _mm256_mul_pd(c1.im, c2.re), mz = c2.im;
    const __m256d dot = _mm256_fmadd_pd(nx, mx, _mm256_fmadd_pd(ny, my, _mm256_mul_pd(nz, mz)));
    const __m256d cx = _mm256_fmsub_pd(ny, mz, _mm256_mul_pd(nz, my));
    const __m256d cy = _mm256_fmsub_pd(nz, mx, _mm256_mul_pd(nx, mz));
    const __m256d cz = _mm256_fmsub_pd(nx, my, _mm256_mul_pd(ny, mx));
    const __m256d sin_d = _mm256_min_pd(
        one, _mm256_sqrt_pd(_mm256_fmadd_pd(cx, cx, _mm256_fmadd_pd(cy, cy, _mm256_mul_pd(cz, cz)))));
    const __m256d defl = atan2_upper(sin_d, dot);
    const __m256d low = _mm256_mul_pd(defl, sin_d);
    const __m256d high = _mm256_mul_pd(defl, _mm256_sub_pd(two, sin_d));
    const __m256d s = _mm256_blendv_pd(high, low, _mm256_cmp_pd(defl, half_pi, _CMP_LE_OQ));

    _mm256_storeu_pd(&torus[i], t);
    _mm256_storeu_pd(&sphere[i], s);
  }
  for (std::size_t i = rows.n; i < rows.padded; ++i) torus[i] = sphere[i] = 0.0;
}

}  // namespace torreg::kernels
