#pragma once

#include <span>
#include <string>

#include "abtrack/ingest.hpp"
#include "abtrack/synth.hpp"

namespace abtrack {

/// SVG overlay of every box in frames [first, last]: one rect per box, stroke
/// color keyed by object id, dashed stroke for interpolated boxes. Throws
/// PreconditionError when the range is empty or leaves [1, frame_count].
std::string render_overlay(std::span<const ObjectTrack> tracks, const SequenceMeta& meta,
                           int first_frame, int last_frame);

/// Stroke color of an object id, stable across runs.
std::string object_color(int id);

}  // namespace abtrack
