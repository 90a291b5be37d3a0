#include "abtrack/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "abtrack/error.hpp"

namespace abtrack {

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

Box2D round_box(const Box2D& b) { return {round2(b.x), round2(b.y), round2(b.w), round2(b.h)}; }

std::optional<Box2D> clip(const Box2D& b, const FrameBounds& f) {
  const double x1 = std::max(b.x, 0.0);
  const double y1 = std::max(b.y, 0.0);
  const double x2 = std::min(b.x + b.w, f.width);
  const double y2 = std::min(b.y + b.h, f.height);
  if (x2 <= x1 || y2 <= y1) return std::nullopt;
  return Box2D{x1, y1, x2 - x1, y2 - y1};
}

double intersection_area(const Box2D& a, const Box2D& b) {
  const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  return ix > 0.0 && iy > 0.0 ? ix * iy : 0.0;
}

void validate(const SyntheticScene& s) {
  if (!s.bounds.valid()) throw PreconditionError("scene: invalid frame bounds");
  if (s.frame_count < 1) throw PreconditionError("scene: frame_count must be >= 1");
  const DetectorNoise& n = s.noise;
  if (n.drop_probability < 0.0 || n.drop_probability > 1.0) throw PreconditionError("scene: drop_probability outside [0, 1]");
  if (n.bursts_per_100_frames < 0.0 || n.burst_min < 1 || n.burst_max < n.burst_min) {
    throw PreconditionError("scene: bad dropout burst parameters");
  }
  if (n.jitter_sigma < 0.0 || n.false_positive_rate < 0.0) throw PreconditionError("scene: negative noise parameter");
  for (const ScriptedObject& o : s.objects) {
    if (o.path.empty()) throw PreconditionError("scene: object without waypoints");
    for (std::size_t i = 1; i < o.path.size(); ++i) {
      if (o.path[i].frame <= o.path[i - 1].frame) throw PreconditionError("scene: waypoint frames must increase");
    }
    for (const Waypoint& w : o.path) {
      if (!(w.w > 0.0 && w.h > 0.0)) throw PreconditionError("scene: waypoint size must be positive");
    }
  }
}

}  // namespace

std::optional<Box2D> scripted_box(const ScriptedObject& obj, int frame) {
  if (obj.path.empty() || frame < obj.path.front().frame || frame > obj.path.back().frame) return std::nullopt;
  std::size_t k = 0;
  while (k + 1 < obj.path.size() && obj.path[k + 1].frame < frame) ++k;
  const Waypoint& a = obj.path[k];
  const Waypoint& b = k + 1 < obj.path.size() ? obj.path[k + 1] : obj.path[k];
  const double t = b.frame == a.frame ? 0.0 : static_cast<double>(frame - a.frame) / (b.frame - a.frame);
  const double cx = a.cx + t * (b.cx - a.cx);
  const double cy = a.cy + t * (b.cy - a.cy);
  const double w = a.w + t * (b.w - a.w);
  const double h = a.h + t * (b.h - a.h);
  return Box2D{cx - 0.5 * w, cy - 0.5 * h, w, h};
}

GeneratedSequence generate(const SyntheticScene& scene) {
  validate(scene);
  const DetectorNoise& noise = scene.noise;
  std::mt19937_64 rng(scene.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  GeneratedSequence out;
  out.meta.name = scene.name;
  out.meta.frame_count = scene.frame_count;
  out.meta.bounds = scene.bounds;

  // Visible span of every object, then its dropout bursts.
  const std::size_t n = scene.objects.size();
  std::vector<std::vector<std::optional<Box2D>>> visible(n, std::vector<std::optional<Box2D>>(scene.frame_count + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (int f = 1; f <= scene.frame_count; ++f) {
      const auto full = scripted_box(scene.objects[i], f);
      if (!full) continue;
      const auto clipped = clip(*full, scene.bounds);
      if (clipped && clipped->area() >= noise.min_visible * full->area()) visible[i][f] = round_box(*clipped);
    }
  }

  std::vector<std::vector<char>> dropped(n, std::vector<char>(scene.frame_count + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    int first = 0, last = -1;
    for (int f = 1; f <= scene.frame_count; ++f) {
      if (!visible[i][f]) continue;
      if (first == 0) first = f;
      last = f;
    }
    const int lifetime = last - first + 1;
    if (noise.bursts_per_100_frames <= 0.0 || lifetime < noise.burst_max + 3) continue;
    std::poisson_distribution<int> count(noise.bursts_per_100_frames * lifetime / 100.0);
    const int bursts = count(rng);
    std::uniform_int_distribution<int> length(noise.burst_min, noise.burst_max);
    for (int b = 0; b < bursts; ++b) {
      const int len = length(rng);
      // Keep an observed frame on both sides of the burst.
      std::uniform_int_distribution<int> start(first + 1, last - len);
      const int s = start(rng);
      for (int f = s; f < s + len; ++f) dropped[i][f] = 1;
    }
  }

  for (int f = 1; f <= scene.frame_count; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const ScriptedObject& obj = scene.objects[i];
      // Draw every variate each frame so the stream does not depend on visibility.
      const double drop_draw = unit(rng);
      const double jx = gauss(rng), jy = gauss(rng), jw = gauss(rng), jh = gauss(rng);
      if (!visible[i][f]) continue;
      const Box2D& box = *visible[i][f];

      Detection gt;
      gt.frame = f;
      gt.id = obj.id;
      gt.box = box;
      gt.class_label = obj.class_label;
      out.ground_truth.push_back(gt);

      bool hidden = dropped[i][f] || drop_draw < noise.drop_probability;
      for (std::size_t k = 0; k < n && !hidden; ++k) {
        if (k == i || !visible[k][f] || scene.objects[k].depth <= obj.depth) continue;
        if (scene.objects[k].class_label != obj.class_label) continue;
        hidden = intersection_area(box, *visible[k][f]) >= noise.occlusion_cover * box.area();
      }
      if (hidden) continue;

      const double s = noise.jitter_sigma;
      Detection d;
      d.frame = f;
      d.box = round_box({box.x + s * jx, box.y + s * jy, std::max(1.0, box.w + s * jw), std::max(1.0, box.h + s * jh)});
      d.confidence = 1.0;
      d.class_label = obj.class_label;
      out.detections.push_back(d);
    }
    if (noise.false_positive_rate > 0.0) {
      std::poisson_distribution<int> count(noise.false_positive_rate);
      const int fps = count(rng);
      for (int k = 0; k < fps; ++k) {
        const double w = 30.0 + 50.0 * unit(rng);
        const double h = 2.5 * w;
        const double x = (scene.bounds.width - w) * unit(rng);
        const double y = (scene.bounds.height - h) * unit(rng);
        Detection d;
        d.frame = f;
        d.box = round_box({x, y, w, h});
        d.confidence = round2(0.3 + 0.7 * unit(rng));
        out.detections.push_back(d);
      }
    }
  }
  return out;
}

SyntheticScene crossing_scene(std::uint64_t seed, int objects, int frames, int occlusions) {
  if (objects < 1 || frames < 10 || occlusions < 0 || objects < 2 * occlusions) {
    throw PreconditionError("crossing_scene needs objects >= max(1, 2 * occlusions) and frames >= 10");
  }
  SyntheticScene s;
  s.name = "crossing";
  s.seed = seed;
  s.frame_count = frames;
  s.noise.jitter_sigma = 1.0;
  s.noise.occlusion_cover = 0.3;

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> vary(0.9, 1.1);

  const int singles = objects - 2 * occlusions;
  const int lanes = occlusions + singles;
  const double spacing = (s.bounds.height - 40.0) / lanes;
  const double h = std::min(150.0, 0.8 * spacing);
  const double w = 0.4 * h;
  const double mid = 0.5 * s.bounds.width;
  int next_id = 1;

  for (int k = 0; k < occlusions; ++k) {
    const double lane_y = 20.0 + spacing * (k + 0.5);
    const int cross = static_cast<int>(std::lround(static_cast<double>(frames) * (k + 1) / (occlusions + 1)));
    const int reach = std::max(cross - 1, frames - cross);
    const double speed = std::min(6.0, 0.8 * (mid - w) / std::max(reach, 1)) * vary(rng);

    ScriptedObject back;
    back.id = next_id++;
    back.depth = 0.0;
    back.path = {{1, mid - speed * (cross - 1), lane_y - 8.0, w, h},
                 {frames, mid + speed * (frames - cross), lane_y - 8.0, w, h}};
    ScriptedObject front;
    front.id = next_id++;
    front.depth = 1.0;
    front.path = {{1, mid + speed * (cross - 1), lane_y, 1.05 * w, 1.05 * h},
                  {frames, mid - speed * (frames - cross), lane_y, 1.05 * w, 1.05 * h}};
    s.objects.push_back(back);
    s.objects.push_back(front);
  }
  for (int k = 0; k < singles; ++k) {
    const double lane_y = 20.0 + spacing * (occlusions + k + 0.5);
    const double start = s.bounds.width * (0.2 + 0.6 * (k + 0.5) / singles);
    const double drift = 0.1 * (s.bounds.width * 0.2) / frames * (k % 2 == 0 ? 1.0 : -1.0) * vary(rng);
    ScriptedObject o;
    o.id = next_id++;
    o.depth = 2.0;
    o.path = {{1, start, lane_y, w, h}, {frames, start + drift * (frames - 1), lane_y, w, h}};
    s.objects.push_back(o);
  }
  return s;
}

SyntheticScene stress_scene(std::uint64_t seed, int objects, int frames) {
  if (objects < 1 || frames < 30) throw PreconditionError("stress_scene needs objects >= 1 and frames >= 30");
  SyntheticScene s;
  s.name = "stress";
  s.seed = seed;
  s.frame_count = frames;
  s.noise.jitter_sigma = 1.0;
  s.noise.occlusion_cover = 0.5;
  s.noise.bursts_per_100_frames = 2.0;
  s.noise.burst_min = 1;
  s.noise.burst_max = 4;
  s.noise.false_positive_rate = 0.02;

  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double W = s.bounds.width;
  const double H = s.bounds.height;

  for (int k = 0; k < objects; ++k) {
    ScriptedObject o;
    o.id = k + 1;
    o.depth = unit(rng);
    const double h = 80.0 + 80.0 * unit(rng);
    const double w = 0.4 * h;
    if (k % 5 < 2) {
      // Present from the first frame, slow straight walk.
      const double cx = 0.15 * W + 0.7 * W * unit(rng);
      const double cy = 0.2 * H + 0.6 * H * unit(rng);
      const double angle = 2.0 * std::acos(-1.0) * unit(rng);
      const double speed = 1.0 + 2.0 * unit(rng);
      o.path = {{1, cx, cy, w, h},
                {frames, cx + speed * std::cos(angle) * (frames - 1), cy + speed * std::sin(angle) * (frames - 1), w, h}};
    } else {
      // Border traffic: enters through the left or right border and walks across.
      const bool from_left = unit(rng) < 0.5;
      const int start = 1 + static_cast<int>((frames / 2) * unit(rng));
      const double speed = 3.0 + 3.0 * unit(rng);
      const double cy = 0.2 * H + 0.6 * H * unit(rng);
      const double x0 = from_left ? -0.5 * w + 1.0 : W + 0.5 * w - 1.0;
      const double dir = from_left ? 1.0 : -1.0;
      const int end = std::min(frames, start + static_cast<int>(std::ceil((W + w) / speed)));
      o.path = {{start, x0, cy, w, h}, {end, x0 + dir * speed * (end - start), cy, w, h}};
    }
    s.objects.push_back(o);
  }
  return s;
}

}  // namespace abtrack
