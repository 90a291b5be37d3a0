#pragma once

#include <span>
#include <vector>

#include "abtrack/config.hpp"
#include "abtrack/hypothesis.hpp"
#include "abtrack/ingest.hpp"
#include "abtrack/tracklet.hpp"

namespace abtrack {

enum class Endpoint { Start, End };

/// A tracklet start or end that the explanation must account for exactly once.
struct EndpointObligation {
  int tracklet = 0;
  Endpoint which = Endpoint::Start;
  int frame = 0;
  Box2D box;
};

/// Start and End obligation of every tracklet, in tracklet order.
std::vector<EndpointObligation> endpoint_obligations(std::span<const Tracklet> tracks);

/// Every event hypothesis whose precondition holds at the obligation, sorted
/// canonically. Always contains Noise for the obligation's tracklet.
std::vector<Hypothesis> endpoint_candidates(const EndpointObligation& ob,
                                            std::span<const Tracklet> all,
                                            const SequenceMeta& meta, const Config& cfg);

/// BelongsTo for face/person pairs satisfying the containment ratio, and
/// SameObject for every pair joined by some link candidate.
std::vector<Hypothesis> belief_candidates(std::span<const Tracklet> all, const Config& cfg);

/// Obligations plus their candidates: the input of the solver.
struct CandidateSet {
  std::vector<EndpointObligation> obligations;
  std::vector<std::vector<Hypothesis>> per_obligation;  // parallel to obligations
  std::vector<Hypothesis> beliefs;
};

CandidateSet abduce_candidates(std::span<const Tracklet> tracks, const SequenceMeta& meta,
                               const Config& cfg);

}  // namespace abtrack
