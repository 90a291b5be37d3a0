#pragma once

#include <cstddef>
#include <istream>
#include <string>

namespace abtrack {

/// Weak-constraint weights. Base costs are charged once per chosen hypothesis,
/// length costs per frame of its duration, `motion` per px/frame of velocity
/// discrepancy across a link.
struct CostWeights {
  double enter = 1.0;
  double exit = 1.0;
  double occlusion = 5.0;
  double missing_det = 5.0;
  double noise = 10.0;
  double occlusion_len = 0.5;
  double missing_det_len = 1.0;
  double noise_len = 2.0;
  double motion = 1.0;

  bool valid() const noexcept;
  CostWeights scaled(double factor) const noexcept;
};

enum class AssociationDistance { Iou, Center };

struct TrackerParams {
  AssociationDistance distance = AssociationDistance::Iou;
  double gate = 0.7;          // max 1 - IoU for an admissible pairing
  double center_gate = 50.0;  // px, used with AssociationDistance::Center
  int max_age = 1;
  int min_hits = 1;
  double min_confidence = 0.0;
  double process_noise_pos = 1e-2;
  double process_noise_vel = 1e-4;
  double measurement_noise = 1e-1;
  double init_velocity_var = 1e2;
};

struct Config {
  CostWeights weights;
  TrackerParams tracker;

  double eps = 0.5;
  double border_margin = 20.0;

  int max_gap = 50;
  std::size_t enumeration_cap = 100000;
  double containment_ratio = 0.8;

  int mt_min_frames = 15;
  double mt_vel_tol = 2.0;

  double iou_threshold = 0.5;

  /// Throws PreconditionError naming the first offending field.
  void validate() const;
};

/// Reads `key = value` lines; `#` starts a comment. Keys not mentioned keep
/// their defaults. Unknown keys and malformed values raise ParseError.
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

/// Every key with its current value, in the order parse_config documents.
std::string format_config(const Config& cfg);

}  // namespace abtrack
