#include <cstdlib>
#include <string>
#include <string_view>

#include "abtrack/error.hpp"
#include "abtrack/simd/box_kernels.hpp"

namespace abtrack::simd {

BoxColumns::BoxColumns(std::span<const Box2D> boxes) {
  x.reserve(boxes.size());
  y.reserve(boxes.size());
  w.reserve(boxes.size());
  h.reserve(boxes.size());
  for (const Box2D& b : boxes) push_back(b);
}

void BoxColumns::push_back(const Box2D& b) {
  x.push_back(b.x);
  y.push_back(b.y);
  w.push_back(b.w);
  h.push_back(b.h);
}

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() noexcept {
#if defined(ABTRACK_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported;
#else
  return false;
#endif
}

Isa active_isa() noexcept {
  static const Isa isa = [] {
    const char* forced = std::getenv("ABTRACK_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

namespace {

void check_sizes(const BoxColumns& boxes, std::span<double> out) {
  if (out.size() != boxes.size()) {
    throw PreconditionError("kernel output size " + std::to_string(out.size()) +
                            " does not match box count " + std::to_string(boxes.size()));
  }
}

}  // namespace

void iou_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) {
  check_sizes(boxes, out);
#if defined(ABTRACK_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) {
    avx2::iou_one_to_many(a, boxes, out);
    return;
  }
#endif
  scalar::iou_one_to_many(a, boxes, out);
}

void center_distance_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) {
  check_sizes(boxes, out);
#if defined(ABTRACK_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) {
    avx2::center_distance_one_to_many(a, boxes, out);
    return;
  }
#endif
  scalar::center_distance_one_to_many(a, boxes, out);
}

}  // namespace abtrack::simd
