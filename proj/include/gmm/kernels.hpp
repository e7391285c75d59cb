#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace gmm::kernels {

/// Vector kernel backends. `scalar` is the reference implementation; `avx2`
/// is selected automatically at startup when the CPU supports it.
enum class Backend { scalar, avx2 };

Backend active_backend();

/// Force a backend. Returns false (and leaves the selection unchanged) if the
/// requested backend is not available on this machine.
bool set_backend(Backend b);

std::string_view backend_name(Backend b);

/// Inner product sum_i a_i * b_i.
double dot(std::span<const double> a, std::span<const double> b);

/// Infinity norm max_i |a_i|; 0 for an empty span.
double norm_inf(std::span<const double> a);

/// out_i = a * x_i + b * y_i. `out` may alias `x` or `y`.
void scaled_sum(std::span<double> out, double a, std::span<const double> x,
                double b, std::span<const double> y);

/// Accumulated secant moments used by the diagonal curvature model:
/// with mu_i = clamp(y_i / s_i, mu_lo, mu_hi) where |s_i| > comp_tol and
/// mu_i = 1 otherwise, returns (sum mu g^2, sum mu g s, sum mu s^2).
struct BbMoments {
  double gg = 0.0;
  double gs = 0.0;
  double ss = 0.0;
};
BbMoments bb_moments(std::span<const double> g, std::span<const double> s,
                     std::span<const double> y, double mu_lo, double mu_hi,
                     double comp_tol);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double norm_inf(const double* a, std::size_t n);
void scaled_sum(double* out, double a, const double* x, double b,
                const double* y, std::size_t n);
BbMoments bb_moments(const double* g, const double* s, const double* y,
                     std::size_t n, double mu_lo, double mu_hi,
                     double comp_tol);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GMM_KERNELS_HAVE_AVX2 1
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double norm_inf(const double* a, std::size_t n);
void scaled_sum(double* out, double a, const double* x, double b,
                const double* y, std::size_t n);
BbMoments bb_moments(const double* g, const double* s, const double* y,
                     std::size_t n, double mu_lo, double mu_hi,
                     double comp_tol);
}  // namespace avx2
#endif

}  // namespace gmm::kernels
