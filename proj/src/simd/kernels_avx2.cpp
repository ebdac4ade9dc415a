#include <immintrin.h>

#include <cassert>
#include <cmath>

#include "wsnagg/simd/kernels.hpp"

namespace wsnagg::simd {
namespace {

constexpr std::size_t kLanes = 4;

void distances_from_avx2(Vec2 origin, std::span<const double> xs, std::span<const double> ys,
                         std::span<double> out) {
  assert(xs.size() == ys.size() && out.size() == xs.size());
  const std::size_t n = xs.size();
  const __m256d ox = _mm256_set1_pd(origin.x);
  const __m256d oy = _mm256_set1_pd(origin.y);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), ox);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), oy);
    const __m256d sq = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(sq));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - origin.x;
    const double dy = ys[i] - origin.y;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

void quadratic_forms_avx2(Vec2 mean, SymInverse2 inv, std::span<const double> xs,
                          std::span<const double> ys, std::span<double> out) {
  assert(xs.size() == ys.size() && out.size() == xs.size());
  const std::size_t n = xs.size();
  const double two_xy = 2.0 * inv.xy;
  const __m256d mx = _mm256_set1_pd(mean.x);
  const __m256d my = _mm256_set1_pd(mean.y);
  const __m256d a = _mm256_set1_pd(inv.xx);
  const __m256d b = _mm256_set1_pd(two_xy);
  const __m256d c = _mm256_set1_pd(inv.yy);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), mx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys.data() + i), my);
    const __m256d t0 = _mm256_mul_pd(_mm256_mul_pd(a, dx), dx);
    const __m256d t1 = _mm256_mul_pd(_mm256_mul_pd(b, dx), dy);
    const __m256d t2 = _mm256_mul_pd(_mm256_mul_pd(c, dy), dy);
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(_mm256_add_pd(t0, t1), t2));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - mean.x;
    const double dy = ys[i] - mean.y;
    out[i] = (inv.xx * dx) * dx + (two_xy * dx) * dy + (inv.yy * dy) * dy;
  }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", &distances_from_avx2, &quadratic_forms_avx2};
  return table;
}

}  // namespace wsnagg::simd
