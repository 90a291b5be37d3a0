#include "abtrack/tracker.hpp"

#include <algorithm>

#include "abtrack/assignment.hpp"
#include "abtrack/error.hpp"
#include "abtrack/simd/box_kernels.hpp"

namespace abtrack {

namespace {

struct LiveTrack {
  int key = 0;
  KalmanState state;
  int hits = 0;
  int misses = 0;
  std::size_t open = 0;  // index into `out` of the tracklet being extended
  bool segment_open = true;
};

}  // namespace

std::vector<Tracklet> build_tracklets(std::span<const Detection> dets, const SequenceMeta& meta,
                                      const Config& cfg, TrackerObserver* observer) {
  cfg.validate();
  const TrackerParams& tp = cfg.tracker;
  const StateMatrix q = process_noise(tp.process_noise_pos, tp.process_noise_vel);
  const MeasurementMatrix r = measurement_noise(tp.measurement_noise);
  const bool by_iou = tp.distance == AssociationDistance::Iou;
  const double gate = by_iou ? tp.gate : tp.center_gate;

  for (std::size_t i = 1; i < dets.size(); ++i) {
    if (dets[i].frame < dets[i - 1].frame) throw PreconditionError("build_tracklets: detections not sorted by frame");
  }

  std::vector<Tracklet> out;
  std::vector<LiveTrack> live;
  int next_key = 1;

  const auto open_tracklet = [&](const Detection& d, int frame) {
    Tracklet t;
    t.id = static_cast<int>(out.size()) + 1;
    t.class_label = d.class_label;
    t.first_frame = frame;
    t.boxes.push_back(d.box);
    out.push_back(std::move(t));
    return out.size() - 1;
  };

  const int last_frame = std::max(meta.frame_count, dets.empty() ? 0 : dets.back().frame);
  std::size_t cursor = 0;
  std::vector<const Detection*> frame_dets;
  std::vector<double> scores;

  for (int frame = 1; frame <= last_frame; ++frame) {
    frame_dets.clear();
    for (; cursor < dets.size() && dets[cursor].frame == frame; ++cursor) {
      require_valid(dets[cursor].box);
      if (dets[cursor].confidence >= tp.min_confidence) frame_dets.push_back(&dets[cursor]);
    }

    for (LiveTrack& t : live) {
      t.state = kalman_predict(t.state, q);
      if (observer != nullptr) observer->on_prediction(frame, t.key, t.state.box());
    }

    simd::BoxColumns columns;
    for (const Detection* d : frame_dets) columns.push_back(d->box);
    CostMatrix cost(live.size(), frame_dets.size(), kForbidden);
    scores.resize(frame_dets.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      // Only same-class detections may continue a track.
      const Box2D predicted = live[i].state.box();
      if (by_iou) {
        simd::iou_one_to_many(predicted, columns, scores);
      } else {
        simd::center_distance_one_to_many(predicted, columns, scores);
      }
      const std::string& cls = out[live[i].open].class_label;
      for (std::size_t j = 0; j < frame_dets.size(); ++j) {
        if (frame_dets[j]->class_label != cls) continue;
        cost(i, j) = by_iou ? 1.0 - scores[j] : scores[j];
      }
    }
    const Matching matching = min_cost_assignment(cost, gate);

    std::vector<char> track_hit(live.size(), 0), det_used(frame_dets.size(), 0);
    for (const auto& [ti, dj] : matching) {
      track_hit[ti] = 1;
      det_used[dj] = 1;
      LiveTrack& t = live[ti];
      const Detection& d = *frame_dets[dj];
      t.state = kalman_update(t.state, d.box, r);
      ++t.hits;
      t.misses = 0;
      if (t.segment_open) {
        out[t.open].boxes.push_back(d.box);
      } else {
        t.open = open_tracklet(d, frame);
        t.segment_open = true;
      }
    }

    std::vector<LiveTrack> survivors;
    survivors.reserve(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      LiveTrack& t = live[i];
      if (!track_hit[i]) {
        ++t.misses;
        t.segment_open = false;
        const bool tentative = t.hits < tp.min_hits;
        if (t.misses >= tp.max_age || tentative) continue;
      }
      survivors.push_back(std::move(t));
    }
    live = std::move(survivors);

    for (std::size_t j = 0; j < frame_dets.size(); ++j) {
      if (det_used[j]) continue;
      const Detection& d = *frame_dets[j];
      LiveTrack t;
      t.key = next_key++;
      t.state = kalman_init(d.box, tp.measurement_noise, tp.init_velocity_var);
      t.hits = 1;
      t.open = open_tracklet(d, frame);
      live.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace abtrack
