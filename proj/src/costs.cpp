#include <algorithm>
#include <cmath>
#include <vector>

#include "abtrack/error.hpp"
#include "abtrack/solve.hpp"

namespace abtrack {

namespace {

const Tracklet& lookup(std::span<const Tracklet> tracks, int id) {
  for (const Tracklet& t : tracks) {
    if (t.id == id) return t;
  }
  throw PreconditionError("unknown tracklet id " + std::to_string(id));
}

// Mean per-frame center velocity over `k` consecutive frames starting at `from`.
std::optional<Point2D> mean_velocity(const Tracklet& t, int from, int k) {
  if (k < 2) return std::nullopt;
  const Point2D a = t.at(from).center();
  const Point2D b = t.at(from + k - 1).center();
  return Point2D{(b.x - a.x) / (k - 1), (b.y - a.y) / (k - 1)};
}

double norm(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }

}  // namespace

double hypothesis_cost(const Hypothesis& h, const CostWeights& w) {
  const double d = static_cast<double>(h.duration());
  switch (h.kind) {
    case HypothesisKind::Enters: return w.enter;
    case HypothesisKind::Exits: return w.exit;
    case HypothesisKind::Occludes: return w.occlusion + w.occlusion_len * d;
    case HypothesisKind::MissingDet: return w.missing_det + w.missing_det_len * d;
    case HypothesisKind::Noise: return w.noise + w.noise_len * d;
    default: return 0.0;
  }
}

double motion_cost(const Hypothesis& link, std::span<const Tracklet> tracks, const CostWeights& w) {
  if (!link.is_link()) throw PreconditionError("motion_cost needs a MissingDet or Occludes hypothesis");
  const Tracklet& gone = lookup(tracks, link.tracks[0]);
  const Tracklet& back = lookup(tracks, link.tracks[1]);
  if (link.span.last - link.span.first <= 0) throw PreconditionError("motion_cost: link gap must be positive");
  if (link.span.first != gone.last_frame() || link.span.last != back.first_frame) {
    throw PreconditionError("motion_cost: link span does not join the tracklets' endpoints");
  }
  const int gap = link.span.last - link.span.first;

  const Point2D exit_c = gone.back().center();
  const Point2D entry_c = back.front().center();
  const Point2D v_gap{(entry_c.x - exit_c.x) / gap, (entry_c.y - exit_c.y) / gap};

  const int k1 = std::min(5, gone.length());
  const int k2 = std::min(5, back.length());
  double total = 0.0;
  if (const auto v1 = mean_velocity(gone, gone.last_frame() - k1 + 1, k1)) {
    total += norm(v1->x - v_gap.x, v1->y - v_gap.y);
  }
  if (const auto v2 = mean_velocity(back, back.first_frame, k2)) {
    total += norm(v2->x - v_gap.x, v2->y - v_gap.y);
  }
  return w.motion * total;
}

double charged_cost(const Hypothesis& h, std::span<const Tracklet> tracks, const CostWeights& w) {
  double c = hypothesis_cost(h, w);
  if (h.is_link()) c += motion_cost(h, tracks, w);
  return c;
}

double explanation_cost(std::span<const Hypothesis> chosen, std::span<const Tracklet> tracks,
                        const CostWeights& w) {
  std::vector<Hypothesis> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (const Hypothesis& h : sorted) total += charged_cost(h, tracks, w);
  return total;
}

bool same_cost(double a, double b) noexcept {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= kCostTieTolerance * scale;
}

}  // namespace abtrack
