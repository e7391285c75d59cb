#include "gmm/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace gmm::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double norm_inf(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void scaled_sum(double* out, double a, const double* x, double b,
                const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

BbMoments bb_moments(const double* g, const double* s, const double* y,
                     std::size_t n, double mu_lo, double mu_hi,
                     double comp_tol) {
  BbMoments m;
  for (std::size_t i = 0; i < n; ++i) {
    double mu = 1.0;
    if (std::fabs(s[i]) > comp_tol) mu = y[i] / s[i];
    mu = std::clamp(mu, mu_lo, mu_hi);
    m.gg += mu * g[i] * g[i];
    m.gs += mu * g[i] * s[i];
    m.ss += mu * s[i] * s[i];
  }
  return m;
}

}  // namespace scalar

namespace {

struct Dispatch {
  Backend backend;
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm_inf)(const double*, std::size_t);
  void (*scaled_sum)(double*, double, const double*, double, const double*,
                     std::size_t);
  BbMoments (*bb_moments)(const double*, const double*, const double*,
                          std::size_t, double, double, double);
};

constexpr Dispatch kScalar{Backend::scalar, scalar::dot, scalar::norm_inf,
                           scalar::scaled_sum, scalar::bb_moments};

#ifdef GMM_KERNELS_HAVE_AVX2
constexpr Dispatch kAvx2{Backend::avx2, avx2::dot, avx2::norm_inf,
                         avx2::scaled_sum, avx2::bb_moments};

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }
#else
bool avx2_supported() { return false; }
#endif

Dispatch pick_default() {
#ifdef GMM_KERNELS_HAVE_AVX2
  if (avx2_supported()) return kAvx2;
#endif
  return kScalar;
}

Dispatch g_dispatch = pick_default();

}  // namespace

Backend active_backend() { return g_dispatch.backend; }

bool set_backend(Backend b) {
  switch (b) {
    case Backend::scalar:
      g_dispatch = kScalar;
      return true;
    case Backend::avx2:
#ifdef GMM_KERNELS_HAVE_AVX2
      if (avx2_supported()) {
        g_dispatch = kAvx2;
        return true;
      }
#endif
      return false;
  }
  return false;
}

std::string_view backend_name(Backend b) {
  return b == Backend::scalar ? "scalar" : "avx2";
}

double dot(std::span<const double> a, std::span<const double> b) {
  return g_dispatch.dot(a.data(), b.data(), a.size());
}

double norm_inf(std::span<const double> a) {
  return g_dispatch.norm_inf(a.data(), a.size());
}

void scaled_sum(std::span<double> out, double a, std::span<const double> x,
                double b, std::span<const double> y) {
  g_dispatch.scaled_sum(out.data(), a, x.data(), b, y.data(), out.size());
}

BbMoments bb_moments(std::span<const double> g, std::span<const double> s,
                     std::span<const double> y, double mu_lo, double mu_hi,
                     double comp_tol) {
  return g_dispatch.bb_moments(g.data(), s.data(), y.data(), g.size(), mu_lo,
                               mu_hi, comp_tol);
}

}  // namespace gmm::kernels
