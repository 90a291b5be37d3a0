#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "abtrack/abduce.hpp"
#include "abtrack/config.hpp"
#include "abtrack/ingest.hpp"
#include "abtrack/tracklet.hpp"

namespace fixtures {

inline abtrack::SequenceMeta meta(int frames, double width = 1280, double height = 720, double margin = 20) {
  abtrack::SequenceMeta m;
  m.name = "fixture";
  m.frame_count = frames;
  m.bounds = {width, height, margin};
  return m;
}

// Constant-velocity tracklet over [first, last].
inline abtrack::Tracklet moving(int id, int first, int last, abtrack::Box2D start, double vx, double vy = 0.0,
                                std::string cls = "person") {
  abtrack::Tracklet t;
  t.id = id;
  t.class_label = std::move(cls);
  t.first_frame = first;
  for (int f = first; f <= last; ++f) {
    t.boxes.push_back({start.x + vx * (f - first), start.y + vy * (f - first), start.w, start.h});
  }
  return t;
}

struct Instance {
  std::vector<abtrack::Tracklet> tracks;
  abtrack::SequenceMeta meta;
  abtrack::Config cfg;
  abtrack::CandidateSet candidates;
};

// Small random scene: at most `max_tracklets` tracklets (two obligations
// each) on a coarse grid so links, occluders, borders and ties all occur.
inline Instance random_instance(std::uint64_t seed, int max_tracklets = 7) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance in;
  const int frames = 40;
  in.meta = meta(frames, 400, 300, 20);
  in.cfg.max_gap = pick(4, 30);
  in.cfg.weights.enter = pick(0, 3);
  in.cfg.weights.exit = pick(0, 3);
  in.cfg.weights.occlusion = pick(1, 8);
  in.cfg.weights.occlusion_len = pick(0, 2) * 0.5;
  in.cfg.weights.missing_det = pick(1, 8);
  in.cfg.weights.missing_det_len = pick(0, 2);
  in.cfg.weights.noise = pick(2, 14);
  in.cfg.weights.noise_len = pick(0, 3);
  in.cfg.weights.motion = pick(0, 2) * 0.5;

  const int n = pick(1, max_tracklets);
  int id = 1;
  for (int i = 0; i < n; ++i) {
    const bool face = i > 0 && pick(0, 4) == 0 && in.tracks[0].class_label == "person";
    if (face) {
      // Face riding inside an earlier person tracklet.
      const abtrack::Tracklet host = in.tracks[static_cast<std::size_t>(pick(0, static_cast<int>(in.tracks.size()) - 1))];
      if (host.class_label != "person") continue;
      const int first = pick(host.first_frame, host.last_frame());
      const int last = pick(first, host.last_frame());
      abtrack::Tracklet f;
      f.id = id++;
      f.class_label = "face";
      f.first_frame = first;
      for (int t = first; t <= last; ++t) {
        const abtrack::Box2D& b = host.at(t);
        f.boxes.push_back({b.x + 10, b.y + 5, 15, 15});
      }
      in.tracks.push_back(f);
      continue;
    }
    const int first = pick(1, frames);
    const int last = std::min(frames, first + pick(0, 14));
    const double x = 10.0 + 40.0 * pick(0, 8);
    const double y = 20.0 + 40.0 * pick(0, 4);
    const double vx = 2.0 * pick(-1, 1);
    in.tracks.push_back(moving(id++, first, last, {x, y, 40, 80}, vx));
  }
  in.candidates = abtrack::abduce_candidates(in.tracks, in.meta, in.cfg);
  return in;
}

}  // namespace fixtures
