#include "gmm/kernels.hpp"

#ifdef GMM_KERNELS_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace gmm::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return std::max(_mm_cvtsd_f64(lo), _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
}

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(mask, v);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

double norm_inf(const double* a, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void scaled_sum(double* out, double a, const double* x, double b,
                const double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(vx, vy));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

BbMoments bb_moments(const double* g, const double* s, const double* y,
                     std::size_t n, double mu_lo, double mu_hi,
                     double comp_tol) {
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vlo = _mm256_set1_pd(mu_lo);
  const __m256d vhi = _mm256_set1_pd(mu_hi);
  const __m256d vtol = _mm256_set1_pd(comp_tol);
  __m256d agg = _mm256_setzero_pd();
  __m256d ags = _mm256_setzero_pd();
  __m256d ass = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vs = _mm256_loadu_pd(s + i);
    __m256d vg = _mm256_loadu_pd(g + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d usable = _mm256_cmp_pd(abs_pd(vs), vtol, _CMP_GT_OQ);
    // Divide unconditionally; lanes with tiny s are blended back to 1.
    __m256d quot = _mm256_div_pd(vy, vs);
    __m256d mu = _mm256_blendv_pd(vone, quot, usable);
    mu = _mm256_min_pd(_mm256_max_pd(mu, vlo), vhi);
    agg = _mm256_add_pd(agg, _mm256_mul_pd(mu, _mm256_mul_pd(vg, vg)));
    ags = _mm256_add_pd(ags, _mm256_mul_pd(mu, _mm256_mul_pd(vg, vs)));
    ass = _mm256_add_pd(ass, _mm256_mul_pd(mu, _mm256_mul_pd(vs, vs)));
  }
  BbMoments m{hsum(agg), hsum(ags), hsum(ass)};
  for (; i < n; ++i) {
    double mu = 1.0;
    if (std::fabs(s[i]) > comp_tol) mu = y[i] / s[i];
    mu = std::clamp(mu, mu_lo, mu_hi);
    m.gg += mu * g[i] * g[i];
    m.gs += mu * g[i] * s[i];
    m.ss += mu * s[i] * s[i];
  }
  return m;
}

}  // namespace gmm::kernels::avx2

#endif  // GMM_KERNELS_HAVE_AVX2
