#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abtrack/geometry.hpp"
#include "abtrack/ingest.hpp"
#include "abtrack/synth.hpp"

namespace abtrack {

struct MotReport {
  std::optional<double> mota;  // undefined when gt_total == 0
  double motp = 0.0;           // mean IoU of matches; 0 without matches
  std::size_t fp = 0;
  std::size_t misses = 0;
  std::size_t mismatches = 0;
  std::size_t recoverable_mismatches = 0;
  std::size_t non_recoverable_mismatches = 0;
  std::size_t matches = 0;
  std::size_t gt_total = 0;
  std::size_t hyp_total = 0;
  double track_precision = 0.0;
  double track_recall = 0.0;
};

/// Identified box observed at a frame.
struct FrameBox {
  int frame = 0;
  int id = 0;
  Box2D box;
};

/// CLEAR-MOT with IoU similarity. Correspondences from earlier frames are
/// kept while their IoU stays >= iou_threshold; the rest are matched by
/// gated min-cost assignment on 1 - IoU. Throws PreconditionError unless
/// 0 < iou_threshold < 1 or when a (frame, id) pair repeats.
MotReport clear_mot(std::span<const FrameBox> hyp, std::span<const FrameBox> gt, double iou_threshold);

MotReport clear_mot(std::span<const ObjectTrack> hyp, std::span<const ObjectTrack> gt,
                    double iou_threshold);

std::vector<FrameBox> frame_boxes(std::span<const ObjectTrack> tracks);
std::vector<FrameBox> frame_boxes(std::span<const Tracklet> tracks);
/// Rows must carry ids; throws ParseError otherwise.
std::vector<FrameBox> frame_boxes(std::span<const Detection> rows);

/// `key = value` lines (mota printed with three decimals or `undefined`).
std::string format_report_kv(const MotReport& r);
/// Human-readable aligned table.
std::string format_report_table(const MotReport& r, const std::string& title);

}  // namespace abtrack
