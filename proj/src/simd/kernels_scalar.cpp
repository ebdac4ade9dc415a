#include <cassert>
#include <cmath>

#include "wsnagg/simd/kernels.hpp"

namespace wsnagg::simd {
namespace {

void distances_from_scalar(Vec2 origin, std::span<const double> xs, std::span<const double> ys,
                           std::span<double> out) {
  assert(xs.size() == ys.size() && out.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - origin.x;
    const double dy = ys[i] - origin.y;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

void quadratic_forms_scalar(Vec2 mean, SymInverse2 inv, std::span<const double> xs,
                            std::span<const double> ys, std::span<double> out) {
  assert(xs.size() == ys.size() && out.size() == xs.size());
  const double two_xy = 2.0 * inv.xy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean.x;
    const double dy = ys[i] - mean.y;
    out[i] = (inv.xx * dx) * dx + (two_xy * dx) * dy + (inv.yy * dy) * dy;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", &distances_from_scalar, &quadratic_forms_scalar};
  return table;
}

}  // namespace wsnagg::simd
