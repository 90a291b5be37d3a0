#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abtrack/geometry.hpp"
#include "abtrack/tracklet.hpp"

namespace abtrack {

/// One row of a MOT16-style file.
struct Detection {
  int frame = 1;
  std::optional<int> id;
  Box2D box;
  double confidence = 1.0;
  std::string class_label = kDefaultClass;
};

struct SequenceMeta {
  std::string name = "sequence";
  int frame_count = 1;
  FrameBounds bounds;
  double frame_rate = 25.0;
};

/// Parses `frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z[,class]`
/// rows. Blank lines are skipped; any other malformed line raises ParseError
/// with its 1-based line number. Output is stably sorted by frame.
std::vector<Detection> parse_mot_csv(std::istream& in);
std::vector<Detection> load_mot_csv(const std::string& path);

/// Rows ordered by (frame, id), coordinates with two decimals, conf 1 and
/// x = y = z = -1. A class other than the default is appended as an 11th
/// field. Throws PreconditionError for a negative (unassigned) id.
std::string write_mot_csv(std::span<const Tracklet> tracks);

/// Rows in the given order, same column layout; absent ids are written as -1
/// and the confidence is kept.
std::string write_detection_rows(std::span<const Detection> rows);

/// Groups identified rows into tracklets (sorted by id). Rows without an id,
/// duplicate (frame, id) rows or an id whose frames have a hole raise ParseError.
std::vector<Tracklet> tracklets_from_rows(std::span<const Detection> rows);

/// `key = value` sequence description (name, frame_count, width, height,
/// frame_rate). `border_margin` comes from the configuration.
SequenceMeta parse_meta(std::istream& in, double border_margin);
SequenceMeta load_meta(const std::string& path, double border_margin);
std::string write_meta(const SequenceMeta& meta);

}  // namespace abtrack
