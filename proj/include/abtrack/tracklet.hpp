#pragma once

#include <string>
#include <vector>

#include "abtrack/geometry.hpp"

namespace abtrack {

inline constexpr const char* kDefaultClass = "person";

/// Gap-free run of boxes for one tentative object, one box per frame starting
/// at `first_frame`.
struct Tracklet {
  int id = -1;
  std::string class_label = kDefaultClass;
  int first_frame = 1;
  std::vector<Box2D> boxes;

  int last_frame() const noexcept { return first_frame + static_cast<int>(boxes.size()) - 1; }
  int length() const noexcept { return static_cast<int>(boxes.size()); }
  bool covers(int frame) const noexcept { return frame >= first_frame && frame <= last_frame(); }
  /// Box at an absolute frame; the frame must be covered.
  const Box2D& at(int frame) const { return boxes.at(static_cast<std::size_t>(frame - first_frame)); }
  const Box2D& front() const { return boxes.front(); }
  const Box2D& back() const { return boxes.back(); }

  friend bool operator==(const Tracklet&, const Tracklet&) = default;
};

}  // namespace abtrack
