#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abtrack/config.hpp"
#include "abtrack/solve.hpp"
#include "abtrack/tracklet.hpp"

namespace abtrack {

enum class Provenance { Observed, Interpolated };

/// Corrected track of one object: contiguous frames, each observed or interpolated.
struct ObjectTrack {
  int id = 0;
  std::string class_label = kDefaultClass;
  int first_frame = 1;
  std::vector<Box2D> boxes;
  std::vector<Provenance> provenance;
  std::vector<int> source_tracklets;  // in temporal order
  std::optional<int> part_of;         // object id of the whole, from BelongsTo

  int last_frame() const noexcept { return first_frame + static_cast<int>(boxes.size()) - 1; }
  bool covers(int frame) const noexcept { return frame >= first_frame && frame <= last_frame(); }
  const Box2D& at(int frame) const { return boxes.at(static_cast<std::size_t>(frame - first_frame)); }

  Tracklet as_tracklet() const;
};

/// Merges tracklets chained by chosen links (gap frames linearly interpolated),
/// drops Noise tracklets and keeps the rest as single-tracklet objects. The
/// object id is the id of the chain's first tracklet; output is sorted by id.
/// Throws PreconditionError on a cyclic or branching link structure.
std::vector<ObjectTrack> synthesize_tracks(const Explanation& expl, std::span<const Tracklet> tracks);

enum class ComplexEventKind { PassingBehind, MovingTogether };

struct ComplexEvent {
  ComplexEventKind kind = ComplexEventKind::PassingBehind;
  int first_object = 0;
  int second_object = 0;
  FrameSpan span;

  friend auto operator<=>(const ComplexEvent&, const ComplexEvent&) = default;
  friend bool operator==(const ComplexEvent&, const ComplexEvent&) = default;
};

/// PassingBehind for every chosen occlusion whose horizontal order of
/// occluded and occluder flips across the gap; MovingTogether for maximal
/// runs of >= cfg.mt_min_frames frames where two objects touch and their
/// center velocities differ by at most cfg.mt_vel_tol. Sorted canonically.
std::vector<ComplexEvent> detect_complex_events(const Explanation& expl,
                                                std::span<const ObjectTrack> final_tracks,
                                                const Config& cfg);

/// `passing_behind(obj1,obj2,102,143).`
std::string to_atom(const ComplexEvent& e);

}  // namespace abtrack
