#include <cmath>

#include "abtrack/simd/box_kernels.hpp"

namespace abtrack::simd::scalar {

void iou_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) noexcept {
  const std::size_t n = boxes.size();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = detail::iou_pair(a.x, a.y, a.w, a.h, boxes.x[i], boxes.y[i], boxes.w[i], boxes.h[i]);
  }
}

void center_distance_one_to_many(const Box2D& a, const BoxColumns& boxes,
                                 std::span<double> out) noexcept {
  const double acx = a.x + 0.5 * a.w;
  const double acy = a.y + 0.5 * a.h;
  const std::size_t n = boxes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = (boxes.x[i] + 0.5 * boxes.w[i]) - acx;
    const double dy = (boxes.y[i] + 0.5 * boxes.h[i]) - acy;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

}  // namespace abtrack::simd::scalar
