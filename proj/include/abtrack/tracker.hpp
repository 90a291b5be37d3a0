#pragma once

#include <span>
#include <vector>

#include "abtrack/config.hpp"
#include "abtrack/ingest.hpp"
#include "abtrack/kalman.hpp"
#include "abtrack/tracklet.hpp"

namespace abtrack {

/// Per-frame observer for diagnostics and tests: called after the predict
/// step with the predicted box of every live track (track key, box).
struct TrackerObserver {
  virtual ~TrackerObserver() = default;
  virtual void on_prediction(int frame, int track_key, const Box2D& predicted) = 0;
};

/// Kalman prediction plus gated min-cost assignment, frame by frame. Every
/// missed frame ends the current tracklet; gaps are never bridged here.
/// Tracklet ids are 1, 2, ... in creation order.
std::vector<Tracklet> build_tracklets(std::span<const Detection> dets, const SequenceMeta& meta,
                                      const Config& cfg, TrackerObserver* observer = nullptr);

}  // namespace abtrack
