#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, where the
// CPU allows, an AVX2 variant picked at runtime. Variants perform the same
// IEEE operations in the same order (no FMA contraction), so their outputs are
// bit-identical and results never depend on which one ran.

#include <cstddef>
#include <span>
#include <string_view>

#include "wsnagg/geometry.hpp"

namespace wsnagg::simd {

/// Inverse of a 2x2 symmetric matrix, [[xx, xy], [xy, yy]].
struct SymInverse2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

struct KernelTable {
  std::string_view name;

  /// out[i] = |(xs[i], ys[i]) - origin|
  void (*distances_from)(Vec2 origin, std::span<const double> xs, std::span<const double> ys,
                         std::span<double> out);

  /// out[i] = d^T inv d with d = (xs[i], ys[i]) - mean, evaluated as
  /// (inv.xx*dx)*dx + ((2*inv.xy)*dx)*dy + (inv.yy*dy)*dy.
  void (*quadratic_forms)(Vec2 mean, SymInverse2 inv, std::span<const double> xs,
                          std::span<const double> ys, std::span<double> out);
};

const KernelTable& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Best table for this CPU. WSNAGG_SIMD=scalar in the environment forces the
/// scalar reference.
const KernelTable& active_kernels();

}  // namespace wsnagg::simd
