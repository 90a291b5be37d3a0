#include "abtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "abtrack/error.hpp"

namespace abtrack {

Tracklet ObjectTrack::as_tracklet() const {
  Tracklet t;
  t.id = id;
  t.class_label = class_label;
  t.first_frame = first_frame;
  t.boxes = boxes;
  return t;
}

std::vector<ObjectTrack> synthesize_tracks(const Explanation& expl, std::span<const Tracklet> tracks) {
  std::map<int, const Tracklet*> by_id;
  for (const Tracklet& t : tracks) {
    if (!by_id.emplace(t.id, &t).second) throw PreconditionError("duplicate tracklet id " + std::to_string(t.id));
  }
  const auto get = [&](int id) -> const Tracklet& {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw PreconditionError("explanation names unknown tracklet " + std::to_string(id));
    return *it->second;
  };

  std::set<int> noise;
  std::map<int, const Hypothesis*> next, prev;
  std::vector<const Hypothesis*> belongs;
  for (const Hypothesis& h : expl.chosen) {
    if (h.kind == HypothesisKind::Noise) noise.insert(get(h.tracks[0]).id);
    if (h.kind == HypothesisKind::BelongsTo) belongs.push_back(&h);
    if (!h.is_link()) continue;
    const Tracklet& gone = get(h.tracks[0]);
    const Tracklet& back = get(h.tracks[1]);
    if (back.first_frame <= gone.last_frame()) {
      throw PreconditionError("link " + to_atom(h) + " does not move forward in time");
    }
    if (!next.emplace(gone.id, &h).second) throw PreconditionError("tracklet " + std::to_string(gone.id) + " has two successors");
    if (!prev.emplace(back.id, &h).second) throw PreconditionError("tracklet " + std::to_string(back.id) + " has two predecessors");
  }
  for (const auto& [id, h] : next) {
    if (noise.contains(h->tracks[0]) || noise.contains(h->tracks[1])) {
      throw PreconditionError("link " + to_atom(*h) + " involves a noise tracklet");
    }
  }

  std::vector<ObjectTrack> out;
  std::set<int> visited;
  for (const Tracklet& head : tracks) {
    if (noise.contains(head.id) || prev.contains(head.id)) continue;
    ObjectTrack obj;
    obj.id = head.id;
    obj.class_label = head.class_label;
    obj.first_frame = head.first_frame;
    const Tracklet* cur = &head;
    for (;;) {
      if (!visited.insert(cur->id).second) throw PreconditionError("cyclic link structure");
      obj.source_tracklets.push_back(cur->id);
      obj.boxes.insert(obj.boxes.end(), cur->boxes.begin(), cur->boxes.end());
      obj.provenance.insert(obj.provenance.end(), cur->boxes.size(), Provenance::Observed);
      const auto it = next.find(cur->id);
      if (it == next.end()) break;
      const Tracklet& nxt = get(it->second->tracks[1]);
      const int t1 = cur->last_frame();
      const int t2 = nxt.first_frame;
      for (int f = t1 + 1; f < t2; ++f) {
        obj.boxes.push_back(interpolate_box(cur->back(), t1, nxt.front(), t2, f));
        obj.provenance.push_back(Provenance::Interpolated);
      }
      cur = &nxt;
    }
    out.push_back(std::move(obj));
  }
  for (const Tracklet& t : tracks) {
    if (!noise.contains(t.id) && !visited.contains(t.id)) throw PreconditionError("cyclic link structure");
  }

  std::map<int, int> object_of;
  for (const ObjectTrack& o : out) {
    for (int src : o.source_tracklets) object_of[src] = o.id;
  }
  for (const Hypothesis* b : belongs) {
    const auto part = object_of.find(b->tracks[0]);
    const auto whole = object_of.find(b->tracks[1]);
    if (part == object_of.end() || whole == object_of.end()) {
      throw PreconditionError(to_atom(*b) + " refers to a noise tracklet");
    }
    for (ObjectTrack& o : out) {
      if (o.id == part->second) o.part_of = whole->second;
    }
  }
  std::sort(out.begin(), out.end(), [](const ObjectTrack& a, const ObjectTrack& b) { return a.id < b.id; });
  return out;
}

namespace {

Point2D velocity_at(const ObjectTrack& o, int f) {
  const Point2D c = o.at(f).center();
  if (o.covers(f - 1)) {
    const Point2D p = o.at(f - 1).center();
    return {c.x - p.x, c.y - p.y};
  }
  if (o.covers(f + 1)) {
    const Point2D n = o.at(f + 1).center();
    return {n.x - c.x, n.y - c.y};
  }
  return {0.0, 0.0};
}

}  // namespace

std::vector<ComplexEvent> detect_complex_events(const Explanation& expl, std::span<const ObjectTrack> final_tracks,
                                                const Config& cfg) {
  std::map<int, const ObjectTrack*> object_of;
  for (const ObjectTrack& o : final_tracks) {
    for (int src : o.source_tracklets) object_of[src] = &o;
  }

  std::vector<ComplexEvent> out;
  for (const Hypothesis& h : expl.chosen) {
    if (h.kind != HypothesisKind::Occludes) continue;
    const auto occluded = object_of.find(h.tracks[0]);
    const auto occluder = object_of.find(h.tracks[2]);
    if (occluded == object_of.end() || occluder == object_of.end()) continue;
    const ObjectTrack& a = *occluded->second;
    const ObjectTrack& b = *occluder->second;
    const int t1 = h.span.first;
    const int t2 = h.span.last;
    if (!a.covers(t1) || !a.covers(t2) || !b.covers(t1) || !b.covers(t2)) continue;
    const double before = a.at(t1).center().x - b.at(t1).center().x;
    const double after = a.at(t2).center().x - b.at(t2).center().x;
    if ((before < 0.0 && after > 0.0) || (before > 0.0 && after < 0.0)) {
      out.push_back({ComplexEventKind::PassingBehind, a.id, b.id, {t1, t2}});
    }
  }

  for (std::size_t i = 0; i < final_tracks.size(); ++i) {
    for (std::size_t j = i + 1; j < final_tracks.size(); ++j) {
      const ObjectTrack& a = final_tracks[i];
      const ObjectTrack& b = final_tracks[j];
      if (a.part_of == b.id || b.part_of == a.id) continue;
      const int first = std::max(a.first_frame, b.first_frame);
      const int last = std::min(a.last_frame(), b.last_frame());
      int run_start = 0;
      int run_length = 0;
      const auto close_run = [&]() {
        if (run_length >= cfg.mt_min_frames) {
          const int lo = std::min(a.id, b.id);
          const int hi = std::max(a.id, b.id);
          out.push_back({ComplexEventKind::MovingTogether, lo, hi, {run_start, run_start + run_length - 1}});
        }
        run_length = 0;
      };
      for (int f = first; f <= last; ++f) {
        const Point2D va = velocity_at(a, f);
        const Point2D vb = velocity_at(b, f);
        const bool together = rcc8_relation(a.at(f), b.at(f), cfg.eps) != Rcc8::DC &&
                              std::hypot(va.x - vb.x, va.y - vb.y) <= cfg.mt_vel_tol;
        if (together) {
          if (run_length == 0) run_start = f;
          ++run_length;
        } else {
          close_run();
        }
      }
      close_run();
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_atom(const ComplexEvent& e) {
  const char* name = e.kind == ComplexEventKind::PassingBehind ? "passing_behind" : "moving_together";
  return std::string(name) + "(obj" + std::to_string(e.first_object) + ",obj" + std::to_string(e.second_object) +
         "," + std::to_string(e.span.first) + "," + std::to_string(e.span.last) + ").";
}

}  // namespace abtrack
