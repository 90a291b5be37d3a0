#pragma once

// Batched box-vs-boxes kernels. Each has a scalar reference and, on x86-64, an
// AVX2 variant; the dispatcher picks one at runtime. Both variants evaluate the
// same expression in the same order without contraction, so results are
// bit-identical.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "abtrack/geometry.hpp"

namespace abtrack::simd {

/// Structure-of-arrays view of a box list.
struct BoxColumns {
  std::vector<double> x, y, w, h;

  BoxColumns() = default;
  explicit BoxColumns(std::span<const Box2D> boxes);

  void push_back(const Box2D& b);
  std::size_t size() const noexcept { return x.size(); }
  bool empty() const noexcept { return x.empty(); }
};

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Best ISA supported by both the build and the running CPU. Setting the
/// environment variable ABTRACK_SIMD=scalar forces the reference path.
Isa active_isa() noexcept;

/// True when the AVX2 translation unit was compiled in and the CPU supports it.
bool avx2_available() noexcept;

// out.size() must equal boxes.size(); throws PreconditionError otherwise.
void iou_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out);
void center_distance_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out);

namespace scalar {
void iou_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) noexcept;
void center_distance_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) noexcept;
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available().
void iou_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) noexcept;
void center_distance_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) noexcept;
}  // namespace avx2

namespace detail {

// Reference per-pair formulas shared by geometry and the scalar kernels.
inline double iou_pair(double ax, double ay, double aw, double ah,
                       double bx, double by, double bw, double bh) noexcept {
  const double ax2 = ax + aw;
  const double ay2 = ay + ah;
  const double bx2 = bx + bw;
  const double by2 = by + bh;
  const double ix = (ax2 < bx2 ? ax2 : bx2) - (ax > bx ? ax : bx);
  const double iy = (ay2 < by2 ? ay2 : by2) - (ay > by ? ay : by);
  if (!(ix > 0.0) || !(iy > 0.0)) return 0.0;
  const double inter = ix * iy;
  // Areas from the same edges as the overlap, so iou(a, a) is exactly 1.
  const double uni = ((ax2 - ax) * (ay2 - ay) + (bx2 - bx) * (by2 - by)) - inter;
  return inter / uni;
}

}  // namespace detail

}  // namespace abtrack::simd
