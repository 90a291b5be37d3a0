#include "catch_amalgamated.hpp"

#include <random>

#include "abtrack/error.hpp"
#include "abtrack/eval.hpp"

using namespace abtrack;

namespace {

std::vector<FrameBox> track(int id, int first, int last, Box2D b, double vx = 0.0) {
  std::vector<FrameBox> out;
  for (int f = first; f <= last; ++f) out.push_back({f, id, {b.x + vx * (f - first), b.y, b.w, b.h}});
  return out;
}

std::vector<FrameBox> join(std::initializer_list<std::vector<FrameBox>> parts) {
  std::vector<FrameBox> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<FrameBox> random_gt(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<FrameBox> gt;
  for (int id = 1; id <= 5; ++id) {
    const int first = 1 + static_cast<int>(u(rng) * 20);
    const int last = first + 5 + static_cast<int>(u(rng) * 20);
    auto t = track(id, first, last, {150.0 * id, 100 + 50 * u(rng), 40, 80}, 4 * u(rng) - 2);
    gt.insert(gt.end(), t.begin(), t.end());
  }
  return gt;
}

}  // namespace

TEST_CASE("perfect tracking", "[eval]") {
  const auto gt = join({track(1, 1, 5, {0, 0, 10, 10}), track(2, 1, 5, {100, 0, 10, 10})});
  const MotReport r = clear_mot(gt, gt, 0.5);
  REQUIRE(r.mota.has_value());
  CHECK(*r.mota == 1.0);
  CHECK(r.motp == 1.0);
  CHECK(r.fp == 0);
  CHECK(r.misses == 0);
  CHECK(r.mismatches == 0);
  CHECK(r.track_precision == 1.0);
  CHECK(r.track_recall == 1.0);
  CHECK(format_report_kv(r).rfind("mota = 1.000\n", 0) == 0);
}

TEST_CASE("hand-built scene with mota 0.6", "[eval]") {
  // A missed at frame 3, B missed at frame 4, B switches from hyp 2 to 3, one stray box.
  const auto gt = join({track(1, 1, 5, {0, 0, 10, 10}), track(2, 1, 5, {100, 0, 10, 10})});
  const auto hyp = join({track(1, 1, 2, {0, 0, 10, 10}), track(1, 4, 5, {0, 0, 10, 10}), track(2, 1, 2, {100, 0, 10, 10}),
                         track(3, 3, 3, {100, 0, 10, 10}), track(3, 5, 5, {100, 0, 10, 10}), track(4, 1, 1, {500, 500, 10, 10})});
  const MotReport r = clear_mot(hyp, gt, 0.5);
  CHECK(r.gt_total == 10);
  CHECK(r.misses == 2);
  CHECK(r.fp == 1);
  CHECK(r.mismatches == 1);
  CHECK(r.non_recoverable_mismatches == 1);
  CHECK(r.recoverable_mismatches == 0);
  REQUIRE(r.mota.has_value());
  CHECK(*r.mota == Catch::Approx(0.6).epsilon(1e-15));
  CHECK(r.matches == 8);
  CHECK(r.track_recall == Catch::Approx(0.8));
  CHECK(r.track_precision == Catch::Approx(8.0 / 9.0));
}

TEST_CASE("empty sides", "[eval]") {
  const auto gt = join({track(1, 1, 5, {0, 0, 10, 10}), track(2, 1, 5, {100, 0, 10, 10})});
  const MotReport none = clear_mot({}, gt, 0.5);
  CHECK(*none.mota == 0.0);
  CHECK(none.misses == 10);
  const MotReport no_gt = clear_mot(gt, {}, 0.5);
  CHECK_FALSE(no_gt.mota.has_value());
  CHECK(no_gt.gt_total == 0);
  CHECK(no_gt.fp == 10);
  CHECK(format_report_kv(no_gt).rfind("mota = undefined\n", 0) == 0);
  CHECK_THROWS_AS(clear_mot(gt, gt, 0.0), PreconditionError);
  CHECK_THROWS_AS(clear_mot(gt, gt, 1.0), PreconditionError);
}

TEST_CASE("switching back is a recoverable mismatch", "[eval]") {
  const auto gt = track(1, 1, 9, {0, 0, 10, 10});
  const auto hyp = join({track(7, 1, 3, {0, 0, 10, 10}), track(8, 4, 6, {0, 0, 10, 10}), track(7, 7, 9, {0, 0, 10, 10})});
  const MotReport r = clear_mot(hyp, gt, 0.5);
  CHECK(r.mismatches == 2);
  CHECK(r.recoverable_mismatches == 1);
  CHECK(r.non_recoverable_mismatches == 1);
}

TEST_CASE("a kept correspondence beats a better newcomer", "[eval]") {
  const auto gt = track(1, 1, 3, {0, 0, 10, 10});
  const auto hyp = join({track(5, 1, 3, {1, 0, 10, 10}), track(6, 2, 3, {0, 0, 10, 10})});
  const MotReport r = clear_mot(hyp, gt, 0.5);
  CHECK(r.mismatches == 0);
  CHECK(r.fp == 2);
}

TEST_CASE("duplicate ids in a frame are rejected", "[eval]") {
  const std::vector<FrameBox> bad{{1, 1, {0, 0, 1, 1}}, {1, 1, {5, 5, 1, 1}}};
  CHECK_THROWS(clear_mot(bad, bad, 0.5));
}

TEST_CASE("clear-mot properties on random scenes", "[eval]") {
  std::mt19937 rng(8);
  for (int rep = 0; rep < 100; ++rep) {
    const auto gt = random_gt(rng);
    const MotReport perfect = clear_mot(gt, gt, 0.5);
    REQUIRE(*perfect.mota == 1.0);

    // One box removed: exactly one more miss.
    auto fewer = gt;
    fewer.erase(fewer.begin() + static_cast<long>(rng() % fewer.size()));
    const MotReport dropped = clear_mot(fewer, gt, 0.5);
    REQUIRE(dropped.misses == 1);
    REQUIRE(dropped.fp == 0);

    // Consistent relabeling changes nothing.
    auto relabeled = gt;
    for (FrameBox& b : relabeled) b.id = 100 - b.id;
    const MotReport same = clear_mot(relabeled, gt, 0.5);
    REQUIRE(same.mismatches == 0);
    REQUIRE(same.motp == perfect.motp);

    // One id switch in the middle of a track adds exactly one mismatch.
    auto switched = gt;
    const int victim = 1 + static_cast<int>(rng() % 5);
    int first = 1 << 30, last = 0;
    for (const FrameBox& b : gt) {
      if (b.id == victim) {
        first = std::min(first, b.frame);
        last = std::max(last, b.frame);
      }
    }
    const int cut = (first + last) / 2 + 1;
    for (FrameBox& b : switched) {
      if (b.id == victim && b.frame >= cut) b.id = 99;
    }
    REQUIRE(clear_mot(switched, gt, 0.5).mismatches == 1);
  }
}

TEST_CASE("motp is invariant under relabeling of noisy hypotheses", "[eval]") {
  std::mt19937 rng(15);
  std::normal_distribution<double> jitter(0, 2);
  for (int rep = 0; rep < 50; ++rep) {
    const auto gt = random_gt(rng);
    auto hyp = gt;
    for (FrameBox& b : hyp) {
      b.box.x += jitter(rng);
      b.box.y += jitter(rng);
    }
    auto relabeled = hyp;
    for (FrameBox& b : relabeled) b.id = b.id * 7 + 3;
    const MotReport a = clear_mot(hyp, gt, 0.5), b = clear_mot(relabeled, gt, 0.5);
    REQUIRE(a.motp == b.motp);
    REQUIRE(a.mismatches == b.mismatches);
    REQUIRE(a.motp <= 1.0);
    REQUIRE(*a.mota <= 1.0);
  }
}
