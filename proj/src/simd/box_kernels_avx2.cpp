// Compiled with -mavx2 and -ffp-contract=off; only entered after a runtime
// CPU check.
#include <immintrin.h>

#include <cmath>

#include "abtrack/simd/box_kernels.hpp"

namespace abtrack::simd::avx2 {

void iou_one_to_many(const Box2D& a, const BoxColumns& boxes, std::span<double> out) noexcept {
  const std::size_t n = boxes.size();
  const __m256d ax = _mm256_set1_pd(a.x);
  const __m256d ay = _mm256_set1_pd(a.y);
  const __m256d ax2 = _mm256_set1_pd(a.x + a.w);
  const __m256d ay2 = _mm256_set1_pd(a.y + a.h);
  const __m256d area_a = _mm256_set1_pd(((a.x + a.w) - a.x) * ((a.y + a.h) - a.y));
  const __m256d zero = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bx = _mm256_loadu_pd(boxes.x.data() + i);
    const __m256d by = _mm256_loadu_pd(boxes.y.data() + i);
    const __m256d bw = _mm256_loadu_pd(boxes.w.data() + i);
    const __m256d bh = _mm256_loadu_pd(boxes.h.data() + i);
    const __m256d bx2 = _mm256_add_pd(bx, bw);
    const __m256d by2 = _mm256_add_pd(by, bh);
    // min/max operand order mirrors the scalar ternaries.
    const __m256d ix = _mm256_sub_pd(_mm256_min_pd(ax2, bx2), _mm256_max_pd(ax, bx));
    const __m256d iy = _mm256_sub_pd(_mm256_min_pd(ay2, by2), _mm256_max_pd(ay, by));
    const __m256d inter = _mm256_mul_pd(ix, iy);
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(area_a, _mm256_mul_pd(_mm256_sub_pd(bx2, bx), _mm256_sub_pd(by2, by))), inter);
    const __m256d ratio = _mm256_div_pd(inter, uni);
    const __m256d positive = _mm256_and_pd(_mm256_cmp_pd(ix, zero, _CMP_GT_OQ),
                                           _mm256_cmp_pd(iy, zero, _CMP_GT_OQ));
    _mm256_storeu_pd(out.data() + i, _mm256_blendv_pd(zero, ratio, positive));
  }
  for (; i < n; ++i) {
    out[i] = detail::iou_pair(a.x, a.y, a.w, a.h, boxes.x[i], boxes.y[i], boxes.w[i], boxes.h[i]);
  }
}

void center_distance_one_to_many(const Box2D& a, const BoxColumns& boxes,
                                 std::span<double> out) noexcept {
  const std::size_t n = boxes.size();
  const double acx_s = a.x + 0.5 * a.w;
  const double acy_s = a.y + 0.5 * a.h;
  const __m256d acx = _mm256_set1_pd(acx_s);
  const __m256d acy = _mm256_set1_pd(acy_s);
  const __m256d half = _mm256_set1_pd(0.5);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bcx = _mm256_add_pd(_mm256_loadu_pd(boxes.x.data() + i),
                                      _mm256_mul_pd(half, _mm256_loadu_pd(boxes.w.data() + i)));
    const __m256d bcy = _mm256_add_pd(_mm256_loadu_pd(boxes.y.data() + i),
                                      _mm256_mul_pd(half, _mm256_loadu_pd(boxes.h.data() + i)));
    const __m256d dx = _mm256_sub_pd(bcx, acx);
    const __m256d dy = _mm256_sub_pd(bcy, acy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(d2));
  }
  for (; i < n; ++i) {
    const double dx = (boxes.x[i] + 0.5 * boxes.w[i]) - acx_s;
    const double dy = (boxes.y[i] + 0.5 * boxes.h[i]) - acy_s;
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

}  // namespace abtrack::simd::avx2
