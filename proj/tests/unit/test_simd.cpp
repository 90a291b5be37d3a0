#include "catch_amalgamated.hpp"

#include <cstring>
#include <random>
#include <vector>

#include "abtrack/error.hpp"
#include "abtrack/geometry.hpp"
#include "abtrack/simd/box_kernels.hpp"

using namespace abtrack;

namespace {

std::vector<Box2D> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(-50, 1300), size(0.5, 400);
  std::vector<Box2D> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({pos(rng), pos(rng), size(rng), size(rng)});
  return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels agree with the geometry primitives", "[simd]") {
  std::mt19937_64 rng(1);
  const auto boxes = random_boxes(rng, 37);
  const simd::BoxColumns cols(boxes);
  std::vector<double> out(boxes.size());
  for (const Box2D& a : random_boxes(rng, 20)) {
    simd::scalar::iou_one_to_many(a, cols, out);
    for (std::size_t i = 0; i < boxes.size(); ++i) REQUIRE(out[i] == iou(a, boxes[i]));
    simd::scalar::center_distance_one_to_many(a, cols, out);
    for (std::size_t i = 0; i < boxes.size(); ++i) REQUIRE(out[i] == Catch::Approx(center_distance(a, boxes[i])));
  }
}

TEST_CASE("avx2 kernels are bit-identical to the scalar ones", "[simd]") {
  if (!simd::avx2_available()) SKIP("AVX2 kernels not available on this machine");
  std::mt19937_64 rng(2);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 13u, 64u, 257u}) {
    auto boxes = random_boxes(rng, n);
    // Exact self-overlap and touching edges hit the boundary branches.
    if (n > 2) {
      boxes[1] = boxes[0];
      boxes[2] = {boxes[0].right(), boxes[0].y, 10, 10};
    }
    const simd::BoxColumns cols(boxes);
    std::vector<double> s(n), v(n);
    for (const Box2D& a : {boxes.empty() ? Box2D{0, 0, 1, 1} : boxes[0], Box2D{100, 100, 50, 80}}) {
      simd::scalar::iou_one_to_many(a, cols, s);
      simd::avx2::iou_one_to_many(a, cols, v);
      REQUIRE(same_bits(s, v));
      simd::scalar::center_distance_one_to_many(a, cols, s);
      simd::avx2::center_distance_one_to_many(a, cols, v);
      REQUIRE(same_bits(s, v));
    }
  }
}

TEST_CASE("dispatched kernels check output size", "[simd]") {
  const std::vector<Box2D> boxes{{0, 0, 10, 10}, {5, 0, 10, 10}};
  const simd::BoxColumns cols(boxes);
  std::vector<double> out(1);
  CHECK_THROWS_AS(simd::iou_one_to_many({0, 0, 10, 10}, cols, out), PreconditionError);
  out.resize(2);
  simd::iou_one_to_many({0, 0, 10, 10}, cols, out);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == Catch::Approx(1.0 / 3.0));
  CHECK((simd::active_isa() == simd::Isa::Scalar || simd::avx2_available()));
}
