#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abtrack/geometry.hpp"
#include "abtrack/ingest.hpp"

namespace abtrack {

/// Piecewise-linear trajectory knot: box center and size at a frame.
struct Waypoint {
  int frame = 1;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct ScriptedObject {
  int id = 1;
  std::string class_label = kDefaultClass;
  std::vector<Waypoint> path;  // strictly increasing frames; object exists between first and last knot
  double depth = 0.0;          // larger is closer to the camera
};

struct DetectorNoise {
  double drop_probability = 0.0;  // independent per object and frame
  double bursts_per_100_frames = 0.0;  // dropout bursts, always bracketed by observed frames
  int burst_min = 1;
  int burst_max = 3;
  double occlusion_cover = 0.3;   // drop when this fraction of the box is covered by a closer object
  double jitter_sigma = 0.0;      // px, applied to x, y, w, h
  double false_positive_rate = 0.0;  // expected spurious boxes per frame
  double min_visible = 0.3;       // fraction of the box inside the frame for GT and detection
};

struct SyntheticScene {
  std::string name = "synthetic";
  FrameBounds bounds{1280.0, 720.0, 20.0};
  int frame_count = 100;
  std::vector<ScriptedObject> objects;
  DetectorNoise noise;
  std::uint64_t seed = 1;
};

struct GeneratedSequence {
  SequenceMeta meta;
  std::vector<Detection> detections;  // ids absent
  std::vector<Detection> ground_truth;
};

/// Deterministic in `scene` (including its seed).
GeneratedSequence generate(const SyntheticScene& scene);

/// Box of an object at a frame (center/size interpolated between knots),
/// before clipping; nullopt outside the object's lifetime.
std::optional<Box2D> scripted_box(const ScriptedObject& obj, int frame);

/// Two people crossing in a hallway; the farther one is hidden while passing
/// behind the nearer one. `occlusions` crossings are staged in sequence.
SyntheticScene crossing_scene(std::uint64_t seed, int objects, int frames, int occlusions);

/// Many targets on straight paths, several entering or leaving through the
/// frame borders mid-sequence, random detector dropouts and false positives.
SyntheticScene stress_scene(std::uint64_t seed, int objects, int frames);

}  // namespace abtrack
