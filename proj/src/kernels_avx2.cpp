#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "fidsim/kernels.hpp"

namespace fidsim::kernels {

namespace {

struct DerivV {
  __m256d fu, fv, fw;
};

inline DerivV rhs(__m256d u, __m256d v, __m256d w, __m256d delta, __m256d wr,
                  __m256d wi, __m256d inv_t1, __m256d inv_t2, __m256d one) {
  // fu = -delta*v + wi*w - u*inv_t2
  __m256d fu = _mm256_fmsub_pd(wi, w, _mm256_mul_pd(delta, v));
  fu = _mm256_fnmadd_pd(u, inv_t2, fu);
  // fv = delta*u + wr*w - v*inv_t2
  __m256d fv = _mm256_fmadd_pd(delta, u, _mm256_mul_pd(wr, w));
  fv = _mm256_fnmadd_pd(v, inv_t2, fv);
  // fw = -wr*v - wi*u - (w + 1)*inv_t1
  __m256d fw = _mm256_fnmsub_pd(wi, u, _mm256_mul_pd(wr, v));
  fw = _mm256_fnmadd_pd(_mm256_add_pd(w, one), inv_t1, fw);
  return {fu, fv, fw};
}

} // namespace

void step_classes_avx2(double* u, double* v, double* w, const double* delta,
                       std::size_t n, const StepParams& p) {
  const __m256d dt = _mm256_set1_pd(p.dt);
  const __m256d half = _mm256_set1_pd(0.5 * p.dt);
  const __m256d sixth = _mm256_set1_pd(p.dt / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d it1 = _mm256_set1_pd(p.inv_t1);
  const __m256d it2 = _mm256_set1_pd(p.inv_t2);
  const __m256d r0r = _mm256_set1_pd(p.rabi0.real());
  const __m256d r0i = _mm256_set1_pd(p.rabi0.imag());
  const __m256d rmr = _mm256_set1_pd(p.rabi_mid.real());
  const __m256d rmi = _mm256_set1_pd(p.rabi_mid.imag());
  const __m256d r1r = _mm256_set1_pd(p.rabi1.real());
  const __m256d r1i = _mm256_set1_pd(p.rabi1.imag());

  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_loadu_pd(delta + k);
    const __m256d u0 = _mm256_loadu_pd(u + k);
    const __m256d v0 = _mm256_loadu_pd(v + k);
    const __m256d w0 = _mm256_loadu_pd(w + k);

    const DerivV k1 = rhs(u0, v0, w0, d, r0r, r0i, it1, it2, one);
    const DerivV k2 = rhs(_mm256_fmadd_pd(half, k1.fu, u0),
                          _mm256_fmadd_pd(half, k1.fv, v0),
                          _mm256_fmadd_pd(half, k1.fw, w0), d, rmr, rmi, it1,
                          it2, one);
    const DerivV k3 = rhs(_mm256_fmadd_pd(half, k2.fu, u0),
                          _mm256_fmadd_pd(half, k2.fv, v0),
                          _mm256_fmadd_pd(half, k2.fw, w0), d, rmr, rmi, it1,
                          it2, one);
    const DerivV k4 = rhs(_mm256_fmadd_pd(dt, k3.fu, u0),
                          _mm256_fmadd_pd(dt, k3.fv, v0),
                          _mm256_fmadd_pd(dt, k3.fw, w0), d, r1r, r1i, it1,
                          it2, one);

    // y += dt/6 * (k1 + 2*(k2 + k3) + k4)
    __m256d su = _mm256_fmadd_pd(two, _mm256_add_pd(k2.fu, k3.fu),
                                 _mm256_add_pd(k1.fu, k4.fu));
    __m256d sv = _mm256_fmadd_pd(two, _mm256_add_pd(k2.fv, k3.fv),
                                 _mm256_add_pd(k1.fv, k4.fv));
    __m256d sw = _mm256_fmadd_pd(two, _mm256_add_pd(k2.fw, k3.fw),
                                 _mm256_add_pd(k1.fw, k4.fw));
    _mm256_storeu_pd(u + k, _mm256_fmadd_pd(sixth, su, u0));
    _mm256_storeu_pd(v + k, _mm256_fmadd_pd(sixth, sv, v0));
    _mm256_storeu_pd(w + k, _mm256_fmadd_pd(sixth, sw, w0));
  }
  if (k < n) step_classes_scalar(u + k, v + k, w + k, delta + k, n - k, p);
}

void weighted_sum_avx2(const double* u, const double* v, const double* wt,
                       std::size_t n, double& su, double& sv) {
  __m256d au = _mm256_setzero_pd();
  __m256d av = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d wk = _mm256_loadu_pd(wt + k);
    au = _mm256_fmadd_pd(wk, _mm256_loadu_pd(u + k), au);
    av = _mm256_fmadd_pd(wk, _mm256_loadu_pd(v + k), av);
  }
  alignas(32) double bu[4], bv[4];
  _mm256_store_pd(bu, au);
  _mm256_store_pd(bv, av);
  double ru = (bu[0] + bu[1]) + (bu[2] + bu[3]);
  double rv = (bv[0] + bv[1]) + (bv[2] + bv[3]);
  for (; k < n; ++k) {
    ru += wt[k] * u[k];
    rv += wt[k] * v[k];
  }
  su = ru;
  sv = rv;
}

} // namespace fidsim::kernels

#endif // x86_64
