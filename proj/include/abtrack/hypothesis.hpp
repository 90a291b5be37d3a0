#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "abtrack/geometry.hpp"

namespace abtrack {

// Declaration order is the canonical sort order of hypotheses.
enum class HypothesisKind {
  Enters,
  Exits,
  Occludes,
  MissingDet,
  Noise,
  SameObject,
  BelongsTo,
  PresentAtStart,
  PresentAtEnd,
};

struct FrameSpan {
  int first = 0;
  int last = 0;

  friend auto operator<=>(const FrameSpan&, const FrameSpan&) = default;
};

/// One abducible event or belief.
///
/// Grounding by kind:
///   Enters/Exits        tracks[0] = the tracklet, span = [t, t], border set
///   Occludes            tracks = {disappearing, reappearing, occluder}, span = [end, start]
///   MissingDet          tracks = {disappearing, reappearing}, span = [end, start]
///   Noise               tracks[0], span = the tracklet's frames
///   SameObject          tracks = {earlier, later}
///   BelongsTo           tracks = {part, whole}
///   PresentAtStart/End  tracks[0], span = [t, t]
/// Unused track slots hold 0.
struct Hypothesis {
  HypothesisKind kind = HypothesisKind::Noise;
  std::array<int, 3> tracks{0, 0, 0};
  std::optional<Border> border;
  FrameSpan span;

  friend auto operator<=>(const Hypothesis&, const Hypothesis&) = default;
  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

  static Hypothesis enters(Border b, int trk, int t);
  static Hypothesis exits(Border b, int trk, int t);
  static Hypothesis occludes(int gone, int back, int occluder, int t1, int t2);
  static Hypothesis missing_det(int gone, int back, int t1, int t2);
  static Hypothesis noise(int trk, int first, int last);
  static Hypothesis same_object(int earlier, int later);
  static Hypothesis belongs_to(int part, int whole);
  static Hypothesis present_at_start(int trk, int t);
  static Hypothesis present_at_end(int trk, int t);

  bool is_link() const noexcept {
    return kind == HypothesisKind::Occludes || kind == HypothesisKind::MissingDet;
  }
  /// Number of meaningful entries in `tracks`.
  int arity() const noexcept;
  /// Gap length for links, frame count for Noise, zero otherwise.
  int duration() const noexcept;
};

std::string_view predicate_name(HypothesisKind k) noexcept;

/// Ground atom, e.g. `occludes(trk3,trk7,trk5,102,143).`
std::string to_atom(const Hypothesis& h);

/// Inverse of to_atom, except that a parsed Noise has the empty span {0, 0}.
/// Throws ParseError (line 0) on malformed text.
Hypothesis parse_atom(std::string_view text);

}  // namespace abtrack
