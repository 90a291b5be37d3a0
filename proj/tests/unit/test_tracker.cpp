#include "catch_amalgamated.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>
#include <map>
#include <numeric>
#include <random>

#include "abtrack/assignment.hpp"
#include "abtrack/config.hpp"
#include "abtrack/error.hpp"
#include "abtrack/kalman.hpp"
#include "abtrack/tracker.hpp"

using namespace abtrack;

namespace {

KalmanState state(std::initializer_list<double> mean) {
  KalmanState s;
  int i = 0;
  for (double v : mean) s.mean(i++) = v;
  return s;
}

// Minimum over all partial injections of rows into columns using admissible
// pairs: max cardinality, then min cost.
std::pair<std::size_t, double> brute_force(const CostMatrix& c, double gate) {
  std::size_t best_card = 0;
  double best_cost = 0.0;
  std::vector<int> assign(c.rows(), -1);
  std::vector<char> used(c.cols(), 0);
  std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t r, std::size_t card, double cost) {
    if (r == c.rows()) {
      if (card > best_card || (card == best_card && cost < best_cost)) {
        best_card = card;
        best_cost = cost;
      }
      return;
    }
    rec(r + 1, card, cost);
    for (std::size_t j = 0; j < c.cols(); ++j) {
      if (used[j] || !(c(r, j) <= gate)) continue;
      used[j] = 1;
      rec(r + 1, card + 1, cost + c(r, j));
      used[j] = 0;
    }
  };
  rec(0, 0, 0.0);
  return {best_card, best_cost};
}

Detection det(int frame, Box2D b, std::string cls = "person") {
  Detection d;
  d.frame = frame;
  d.box = b;
  d.class_label = std::move(cls);
  return d;
}

SequenceMeta meta(int frames) {
  SequenceMeta m;
  m.name = "t";
  m.frame_count = frames;
  m.bounds = {1280, 720, 20};
  return m;
}

struct Recorder : TrackerObserver {
  std::map<std::pair<int, int>, Box2D> predictions;
  void on_prediction(int frame, int key, const Box2D& b) override { predictions[{frame, key}] = b; }
};

}  // namespace

TEST_CASE("kalman predict", "[tracker][kalman]") {
  const StateMatrix q = StateMatrix::Zero();
  KalmanState s = state({100, 50, 20, 40, 5, -2, 0, 0});
  const KalmanState p = kalman_predict(s, q);
  CHECK(p.mean.head<4>() == Eigen::Vector4d(105, 48, 20, 40));

  const KalmanState still = kalman_predict(state({100, 50, 20, 40, 0, 0, 0, 0}), q);
  CHECK(still.mean.head<4>() == Eigen::Vector4d(100, 50, 20, 40));

  s.covariance = StateMatrix::Identity();
  CHECK(kalman_predict(s, q).covariance.trace() == 12.0);
}

TEST_CASE("kalman update", "[tracker][kalman]") {
  KalmanState s = state({0, 0, 10, 10, 0, 0, 0, 0});
  s.covariance = StateMatrix::Identity();
  const MeasurementMatrix r = MeasurementMatrix::Identity();

  const KalmanState same = kalman_update(s, {0, 0, 10, 10}, r);
  CHECK(same.mean.head<4>() == Eigen::Vector4d(0, 0, 10, 10));

  // Scalar P equal to R gives gain 0.5.
  const KalmanState half = kalman_update(s, {4, 0, 10, 10}, r);
  CHECK(half.mean(0) == Catch::Approx(2.0).epsilon(1e-12));

  const KalmanState exact = kalman_update(s, {4, 3, 12, 9}, MeasurementMatrix::Zero());
  CHECK(exact.mean(0) == Catch::Approx(4.0).margin(1e-12));
  CHECK(exact.mean(1) == Catch::Approx(3.0).margin(1e-12));
  CHECK(exact.mean(2) == Catch::Approx(12.0).margin(1e-12));
  CHECK(exact.mean(3) == Catch::Approx(9.0).margin(1e-12));

  const KalmanState ignored = kalman_update(s, {4, 3, 12, 9}, MeasurementMatrix::Identity() * 1e12);
  CHECK(ignored.mean(0) == Catch::Approx(0.0).margin(1e-9));

  MeasurementMatrix bad = MeasurementMatrix::Identity();
  bad(0, 0) = -1;
  CHECK_THROWS_AS(kalman_update(s, {4, 0, 10, 10}, bad), PreconditionError);
  bad = MeasurementMatrix::Identity();
  bad(0, 1) = 0.5;
  CHECK_THROWS_AS(kalman_update(s, {4, 0, 10, 10}, bad), PreconditionError);
}

TEST_CASE("kalman covariance stays symmetric", "[tracker][kalman]") {
  KalmanState s = kalman_init({10, 10, 30, 60}, 0.1, 100);
  const StateMatrix q = process_noise(1e-2, 1e-4);
  const MeasurementMatrix r = measurement_noise(0.1);
  for (int k = 1; k < 50; ++k) {
    s = kalman_predict(s, q);
    s = kalman_update(s, {10.0 + 3 * k, 10.0 + k, 30, 60}, r);
    REQUIRE((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(s.covariance.diagonal().minCoeff() >= 0.0);
  }
}

TEST_CASE("assignment examples", "[tracker][assignment]") {
  const CostMatrix a{{1, 2}, {2, 1}};
  CHECK(min_cost_assignment(a, 10) == Matching{{0, 0}, {1, 1}});
  CHECK(matching_cost(a, min_cost_assignment(a, 10)) == 2);
  const CostMatrix b{{4, 1}, {2, 3}};
  CHECK(min_cost_assignment(b, 10) == Matching{{0, 1}, {1, 0}});
  CHECK(matching_cost(b, min_cost_assignment(b, 10)) == 3);
  const CostMatrix c{{1, 50}, {50, 50}};
  CHECK(min_cost_assignment(c, 10) == Matching{{0, 0}});
  CHECK(min_cost_assignment(CostMatrix{}, 1).empty());
  CHECK(min_cost_assignment(CostMatrix(3, 0), 1).empty());
  const CostMatrix forbidden{{kForbidden, 1}, {kForbidden, kForbidden}};
  CHECK(min_cost_assignment(forbidden, 10) == Matching{{0, 1}});
}

TEST_CASE("assignment ties break lexicographically", "[tracker][assignment]") {
  const CostMatrix flat(3, 3, 1.0);
  CHECK(min_cost_assignment(flat, 2) == Matching{{0, 0}, {1, 1}, {2, 2}});
  const CostMatrix tie{{1, 1}, {1, 1}, {1, 1}};
  CHECK(min_cost_assignment(tie, 2) == Matching{{0, 0}, {1, 1}});
}

TEST_CASE("assignment equals permutation brute force", "[tracker][assignment]") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 200; ++rep) {
    CostMatrix c(dim(rng), dim(rng));
    for (std::size_t i = 0; i < c.rows(); ++i) {
      for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = u(rng) < 0.1 ? kForbidden : std::round(u(rng) * 20) / 4;
    }
    const double gate = 1 + u(rng) * 5;
    const auto [card, cost] = brute_force(c, gate);
    const Matching m = min_cost_assignment(c, gate);
    REQUIRE(m.size() == card);
    REQUIRE(matching_cost(c, m) == Catch::Approx(cost).margin(1e-9));
    for (const auto& [i, j] : m) REQUIRE(c(i, j) <= gate);
  }
}

TEST_CASE("one smooth stream makes one tracklet", "[tracker]") {
  std::vector<Detection> dets;
  for (int f = 1; f <= 5; ++f) dets.push_back(det(f, {100.0 + 4 * f, 100, 40, 80}));
  const auto tracks = build_tracklets(dets, meta(5), Config{});
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].id == 1);
  CHECK(tracks[0].length() == 5);
  CHECK(tracks[0].first_frame == 1);
}

TEST_CASE("far apart streams stay separate", "[tracker]") {
  std::vector<Detection> dets;
  for (int f = 1; f <= 10; ++f) {
    dets.push_back(det(f, {100.0 + 2 * f, 100, 40, 80}));
    dets.push_back(det(f, {600.0 - 2 * f, 100, 40, 80}));
  }
  const auto tracks = build_tracklets(dets, meta(10), Config{});
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].length() == 10);
  CHECK(tracks[1].length() == 10);
  CHECK(tracks[0].front().x == 102);
  CHECK(tracks[1].front().x == 598);
}

TEST_CASE("a hole splits the stream", "[tracker]") {
  std::vector<Detection> dets;
  for (int f = 1; f <= 12; ++f) {
    if (f >= 5 && f <= 7) continue;
    dets.push_back(det(f, {100.0 + f, 100, 40, 80}));
  }
  const auto tracks = build_tracklets(dets, meta(12), Config{});
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].first_frame == 1);
  CHECK(tracks[0].last_frame() == 4);
  CHECK(tracks[1].first_frame == 8);
  CHECK(tracks[1].last_frame() == 12);
}

TEST_CASE("a surviving track reopens as a new tracklet", "[tracker]") {
  Config cfg;
  cfg.tracker.max_age = 3;
  std::vector<Detection> dets;
  for (int f = 1; f <= 10; ++f) {
    if (f == 5) continue;
    dets.push_back(det(f, {100, 100, 40, 80}));
  }
  const auto tracks = build_tracklets(dets, meta(10), cfg);
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[0].last_frame() == 4);
  CHECK(tracks[1].first_frame == 6);
}

TEST_CASE("classes never share a track", "[tracker]") {
  std::vector<Detection> dets;
  for (int f = 1; f <= 4; ++f) dets.push_back(det(f, {100, 100, 40, 80}, f <= 2 ? "person" : "face"));
  const auto tracks = build_tracklets(dets, meta(4), Config{});
  REQUIRE(tracks.size() == 2);
  CHECK(tracks[1].class_label == "face");
}

TEST_CASE("center distance association", "[tracker]") {
  Config cfg;
  cfg.tracker.distance = AssociationDistance::Center;
  cfg.tracker.center_gate = 30;
  std::vector<Detection> dets;
  // Small boxes moving fast have no IoU from frame to frame.
  for (int f = 1; f <= 6; ++f) dets.push_back(det(f, {100.0 + 20 * f, 100, 10, 10}));
  CHECK(build_tracklets(dets, meta(6), cfg).size() == 1);
  CHECK(build_tracklets(dets, meta(6), Config{}).size() == 6);
}

TEST_CASE("noiseless linear motion is predicted exactly after warm-up", "[tracker]") {
  Config cfg;
  cfg.tracker.process_noise_pos = 0;
  cfg.tracker.process_noise_vel = 0;
  cfg.tracker.measurement_noise = 0;
  std::vector<Detection> dets;
  auto truth = [](int f) { return Box2D{50.0 + 3.5 * f, 80.0 - 1.25 * f, 40.0 + 0.5 * f, 90.0 + 0.25 * f}; };
  for (int f = 1; f <= 60; ++f) dets.push_back(det(f, truth(f)));
  Recorder rec;
  const auto tracks = build_tracklets(dets, meta(60), cfg, &rec);
  REQUIRE(tracks.size() == 1);
  double worst = 0.0;
  for (const auto& [key, b] : rec.predictions) {
    if (key.first <= 2) continue;
    const Box2D t = truth(key.first);
    worst = std::max({worst, std::abs(b.x - t.x), std::abs(b.y - t.y), std::abs(b.w - t.w), std::abs(b.h - t.h)});
  }
  CHECK(rec.predictions.size() == 59);
  CHECK(worst < 1e-6);
}

TEST_CASE("detections are conserved", "[tracker]") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 30; ++rep) {
    Config cfg;
    cfg.tracker.min_confidence = 0.3;
    cfg.tracker.max_age = 1 + rep % 3;
    std::vector<Detection> dets;
    for (int f = 1; f <= 40; ++f) {
      for (int k = 0; k < 6; ++k) {
        if (u(rng) < 0.2) continue;
        Detection d = det(f, {100.0 * k + 3 * f + 5 * u(rng), 200 + 10 * u(rng), 40, 80}, k == 5 ? "face" : "person");
        d.confidence = u(rng);
        dets.push_back(d);
      }
    }
    const auto tracks = build_tracklets(dets, meta(40), cfg);
    std::multiset<std::tuple<int, double, double, std::string>> kept, emitted;
    for (const Detection& d : dets) {
      if (d.confidence >= 0.3) kept.insert({d.frame, d.box.x, d.box.y, d.class_label});
    }
    for (const Tracklet& t : tracks) {
      for (int f = t.first_frame; f <= t.last_frame(); ++f) emitted.insert({f, t.at(f).x, t.at(f).y, t.class_label});
    }
    REQUIRE(kept == emitted);
    for (std::size_t i = 0; i < tracks.size(); ++i) REQUIRE(tracks[i].id == static_cast<int>(i) + 1);
  }
}

TEST_CASE("tracker rejects unsorted input", "[tracker]") {
  const std::vector<Detection> dets{det(2, {0, 0, 5, 5}), det(1, {0, 0, 5, 5})};
  CHECK_THROWS_AS(build_tracklets(dets, meta(2), Config{}), PreconditionError);
}
