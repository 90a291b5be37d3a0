#include "abtrack/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "abtrack/assignment.hpp"
#include "abtrack/error.hpp"
#include "abtrack/simd/box_kernels.hpp"
#include "text.hpp"

namespace abtrack {

namespace {

using FrameIndex = std::map<int, std::vector<const FrameBox*>>;

FrameIndex by_frame(std::span<const FrameBox> boxes, const char* side) {
  FrameIndex idx;
  std::set<std::pair<int, int>> seen;
  for (const FrameBox& b : boxes) {
    require_valid(b.box);
    if (!seen.emplace(b.frame, b.id).second) {
      throw PreconditionError(std::string(side) + " repeats id " + std::to_string(b.id) + " in frame " +
                              std::to_string(b.frame));
    }
    idx[b.frame].push_back(&b);
  }
  for (auto& [f, list] : idx) {
    std::sort(list.begin(), list.end(), [](const FrameBox* a, const FrameBox* b) { return a->id < b->id; });
  }
  return idx;
}

struct SwitchEvent {
  int gt = 0;
  int previous_hyp = 0;
  int frame = 0;
};

}  // namespace

MotReport clear_mot(std::span<const FrameBox> hyp, std::span<const FrameBox> gt, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw PreconditionError("iou_threshold must lie in (0, 1)");
  }
  const FrameIndex hyp_idx = by_frame(hyp, "hypothesis");
  const FrameIndex gt_idx = by_frame(gt, "ground truth");

  MotReport r;
  r.gt_total = gt.size();
  r.hyp_total = hyp.size();

  std::set<int> frames;
  for (const auto& [f, v] : hyp_idx) frames.insert(f);
  for (const auto& [f, v] : gt_idx) frames.insert(f);

  std::map<int, int> last_match;                 // gt id -> hyp id
  std::map<std::pair<int, int>, int> last_pair;  // (gt, hyp) -> last frame matched
  std::vector<SwitchEvent> switches;
  double iou_sum = 0.0;
  static const std::vector<const FrameBox*> kNone;

  for (int f : frames) {
    const auto git = gt_idx.find(f);
    const auto hit = hyp_idx.find(f);
    const auto& gs = git == gt_idx.end() ? kNone : git->second;
    const auto& hs = hit == hyp_idx.end() ? kNone : hit->second;

    simd::BoxColumns hyp_cols;
    for (const FrameBox* h : hs) hyp_cols.push_back(h->box);
    std::vector<std::vector<double>> overlap(gs.size(), std::vector<double>(hs.size(), 0.0));
    for (std::size_t i = 0; i < gs.size(); ++i) simd::iou_one_to_many(gs[i]->box, hyp_cols, overlap[i]);

    std::vector<char> g_used(gs.size(), 0), h_used(hs.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> matches;

    // Keep correspondences that are still valid.
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const auto lm = last_match.find(gs[i]->id);
      if (lm == last_match.end()) continue;
      for (std::size_t j = 0; j < hs.size(); ++j) {
        if (hs[j]->id == lm->second && !h_used[j] && overlap[i][j] >= iou_threshold) {
          g_used[i] = h_used[j] = 1;
          matches.emplace_back(i, j);
          break;
        }
      }
    }

    std::vector<std::size_t> open_g, open_h;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (!g_used[i]) open_g.push_back(i);
    }
    for (std::size_t j = 0; j < hs.size(); ++j) {
      if (!h_used[j]) open_h.push_back(j);
    }
    CostMatrix cost(open_g.size(), open_h.size(), kForbidden);
    for (std::size_t a = 0; a < open_g.size(); ++a) {
      for (std::size_t b = 0; b < open_h.size(); ++b) {
        const double o = overlap[open_g[a]][open_h[b]];
        if (o >= iou_threshold) cost(a, b) = 1.0 - o;
      }
    }
    for (const auto& [a, b] : min_cost_assignment(cost, 1.0)) {
      const std::size_t i = open_g[a];
      const std::size_t j = open_h[b];
      const auto lm = last_match.find(gs[i]->id);
      if (lm != last_match.end() && lm->second != hs[j]->id) {
        ++r.mismatches;
        switches.push_back({gs[i]->id, lm->second, f});
      }
      matches.emplace_back(i, j);
    }

    for (const auto& [i, j] : matches) {
      last_match[gs[i]->id] = hs[j]->id;
      last_pair[{gs[i]->id, hs[j]->id}] = f;
      iou_sum += overlap[i][j];
    }
    r.matches += matches.size();
    r.misses += gs.size() - matches.size();
    r.fp += hs.size() - matches.size();
  }

  for (const SwitchEvent& s : switches) {
    const auto it = last_pair.find({s.gt, s.previous_hyp});
    if (it != last_pair.end() && it->second > s.frame) {
      ++r.recoverable_mismatches;
    } else {
      ++r.non_recoverable_mismatches;
    }
  }

  r.motp = r.matches == 0 ? 0.0 : iou_sum / static_cast<double>(r.matches);
  if (r.gt_total > 0) {
    r.mota = 1.0 - static_cast<double>(r.misses + r.fp + r.mismatches) / static_cast<double>(r.gt_total);
    r.track_recall = static_cast<double>(r.matches) / static_cast<double>(r.gt_total);
  }
  if (r.hyp_total > 0) r.track_precision = static_cast<double>(r.matches) / static_cast<double>(r.hyp_total);
  return r;
}

std::vector<FrameBox> frame_boxes(std::span<const ObjectTrack> tracks) {
  std::vector<FrameBox> out;
  for (const ObjectTrack& t : tracks) {
    for (int f = t.first_frame; f <= t.last_frame(); ++f) out.push_back({f, t.id, t.at(f)});
  }
  return out;
}

std::vector<FrameBox> frame_boxes(std::span<const Tracklet> tracks) {
  std::vector<FrameBox> out;
  for (const Tracklet& t : tracks) {
    for (int f = t.first_frame; f <= t.last_frame(); ++f) out.push_back({f, t.id, t.at(f)});
  }
  return out;
}

std::vector<FrameBox> frame_boxes(std::span<const Detection> rows) {
  std::vector<FrameBox> out;
  for (const Detection& d : rows) {
    if (!d.id) throw ParseError(0, "row at frame " + std::to_string(d.frame) + " has no id");
    out.push_back({d.frame, *d.id, d.box});
  }
  return out;
}

MotReport clear_mot(std::span<const ObjectTrack> hyp, std::span<const ObjectTrack> gt, double iou_threshold) {
  const auto h = frame_boxes(hyp);
  const auto g = frame_boxes(gt);
  return clear_mot(std::span<const FrameBox>(h), std::span<const FrameBox>(g), iou_threshold);
}

std::string format_report_kv(const MotReport& r) {
  std::ostringstream out;
  out << "mota = " << (r.mota ? text::format_fixed(*r.mota, 3) : std::string("undefined")) << '\n'
      << "motp = " << text::format_fixed(r.motp, 3) << '\n'
      << "fp = " << r.fp << '\n'
      << "misses = " << r.misses << '\n'
      << "mismatches = " << r.mismatches << '\n'
      << "non_recoverable_mismatches = " << r.non_recoverable_mismatches << '\n'
      << "recoverable_mismatches = " << r.recoverable_mismatches << '\n'
      << "matches = " << r.matches << '\n'
      << "gt_total = " << r.gt_total << '\n'
      << "hyp_total = " << r.hyp_total << '\n'
      << "track_precision = " << text::format_fixed(r.track_precision, 3) << '\n'
      << "track_recall = " << text::format_fixed(r.track_recall, 3) << '\n';
  return out.str();
}

std::string format_report_table(const MotReport& r, const std::string& title) {
  const auto pct = [](std::optional<double> v) {
    return v ? text::format_fixed(100.0 * *v, 1) + " %" : std::string("n/a");
  };
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%-20s %9s %9s %6s %6s %6s %9s %6s %6s %6s\n", "sequence", "MOTA", "MOTP", "FP", "M",
                "MM", "non-r.MM", "r.MM", "TP", "TR");
  out << line;
  std::snprintf(line, sizeof line, "%-20s %9s %9s %6zu %6zu %6zu %9zu %6zu %6.3f %6.3f\n", title.c_str(),
                pct(r.mota).c_str(), pct(r.motp).c_str(), r.fp, r.misses, r.mismatches, r.non_recoverable_mismatches,
                r.recoverable_mismatches, r.track_precision, r.track_recall);
  out << line;
  return out.str();
}

}  // namespace abtrack
