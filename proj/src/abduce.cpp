#include "abtrack/abduce.hpp"

#include <algorithm>

#include "abtrack/error.hpp"

namespace abtrack {

namespace {

const Tracklet& find_tracklet(std::span<const Tracklet> all, int id) {
  for (const Tracklet& t : all) {
    if (t.id == id) return t;
  }
  throw PreconditionError("unknown tracklet id " + std::to_string(id));
}

void sort_unique(std::vector<Hypothesis>& hs) {
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
}

// Link hypotheses explaining that `gone` ends and `back` starts as the same object.
void link_candidates(const Tracklet& gone, const Tracklet& back, std::span<const Tracklet> all,
                     const Config& cfg, std::vector<Hypothesis>& out) {
  if (gone.id == back.id || gone.class_label != back.class_label) return;
  const int t1 = gone.last_frame();
  const int t2 = back.first_frame;
  const int gap = t2 - t1;
  if (gap <= 0 || gap > cfg.max_gap) return;

  out.push_back(Hypothesis::missing_det(gone.id, back.id, t1, t2));
  for (const Tracklet& occluder : all) {
    if (occluder.id == gone.id || occluder.id == back.id) continue;
    if (!occluder.covers(t1) || !occluder.covers(t2)) continue;
    if (!interiors_overlap(rcc8_relation(gone.back(), occluder.at(t1), cfg.eps))) continue;
    if (!interiors_overlap(rcc8_relation(back.front(), occluder.at(t2), cfg.eps))) continue;
    out.push_back(Hypothesis::occludes(gone.id, back.id, occluder.id, t1, t2));
  }
}

}  // namespace

std::vector<EndpointObligation> endpoint_obligations(std::span<const Tracklet> tracks) {
  std::vector<EndpointObligation> out;
  out.reserve(2 * tracks.size());
  for (const Tracklet& t : tracks) {
    if (t.boxes.empty()) throw PreconditionError("tracklet " + std::to_string(t.id) + " is empty");
    out.push_back({t.id, Endpoint::Start, t.first_frame, t.front()});
    out.push_back({t.id, Endpoint::End, t.last_frame(), t.back()});
  }
  return out;
}

std::vector<Hypothesis> endpoint_candidates(const EndpointObligation& ob, std::span<const Tracklet> all,
                                            const SequenceMeta& meta, const Config& cfg) {
  const Tracklet& self = find_tracklet(all, ob.tracklet);
  const bool is_start = ob.which == Endpoint::Start;
  if (ob.frame != (is_start ? self.first_frame : self.last_frame())) {
    throw PreconditionError("obligation frame does not match tracklet " + std::to_string(self.id));
  }

  std::vector<Hypothesis> out;
  if (const auto border = border_contact(ob.box, meta.bounds)) {
    out.push_back(is_start ? Hypothesis::enters(*border, self.id, ob.frame)
                           : Hypothesis::exits(*border, self.id, ob.frame));
  }
  if (is_start && ob.frame == 1) out.push_back(Hypothesis::present_at_start(self.id, ob.frame));
  if (!is_start && ob.frame == meta.frame_count) out.push_back(Hypothesis::present_at_end(self.id, ob.frame));

  for (const Tracklet& other : all) {
    if (is_start) {
      link_candidates(other, self, all, cfg, out);
    } else {
      link_candidates(self, other, all, cfg, out);
    }
  }
  out.push_back(Hypothesis::noise(self.id, self.first_frame, self.last_frame()));
  sort_unique(out);
  return out;
}

std::vector<Hypothesis> belief_candidates(std::span<const Tracklet> all, const Config& cfg) {
  std::vector<Hypothesis> out;
  for (const Tracklet& face : all) {
    if (face.class_label != "face") continue;
    for (const Tracklet& person : all) {
      if (person.class_label != "person") continue;
      const int first = std::max(face.first_frame, person.first_frame);
      const int last = std::min(face.last_frame(), person.last_frame());
      if (first > last) continue;
      int inside = 0;
      for (int f = first; f <= last; ++f) {
        const Rcc8 r = rcc8_relation(face.at(f), person.at(f), cfg.eps);
        if (r == Rcc8::NTPP || r == Rcc8::TPP) ++inside;
      }
      if (static_cast<double>(inside) >= cfg.containment_ratio * static_cast<double>(last - first + 1)) {
        out.push_back(Hypothesis::belongs_to(face.id, person.id));
      }
    }
  }
  std::vector<Hypothesis> links;
  for (const Tracklet& gone : all) {
    for (const Tracklet& back : all) link_candidates(gone, back, all, cfg, links);
  }
  for (const Hypothesis& l : links) out.push_back(Hypothesis::same_object(l.tracks[0], l.tracks[1]));
  sort_unique(out);
  return out;
}

CandidateSet abduce_candidates(std::span<const Tracklet> tracks, const SequenceMeta& meta, const Config& cfg) {
  cfg.validate();
  CandidateSet set;
  set.obligations = endpoint_obligations(tracks);
  set.per_obligation.reserve(set.obligations.size());
  for (const EndpointObligation& ob : set.obligations) {
    set.per_obligation.push_back(endpoint_candidates(ob, tracks, meta, cfg));
  }
  set.beliefs = belief_candidates(tracks, cfg);
  return set;
}

}  // namespace abtrack
