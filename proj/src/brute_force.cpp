// Exhaustive reference solver. Deliberately shares nothing with the
// branch-and-bound search beyond the cost functions.
#include <algorithm>
#include <limits>
#include <map>

#include "abtrack/error.hpp"
#include "abtrack/solve.hpp"

namespace abtrack {

namespace {

bool explains(const Hypothesis& h, const EndpointObligation& ob) {
  const bool start = ob.which == Endpoint::Start;
  switch (h.kind) {
    case HypothesisKind::Enters:
    case HypothesisKind::PresentAtStart: return start && h.tracks[0] == ob.tracklet;
    case HypothesisKind::Exits:
    case HypothesisKind::PresentAtEnd: return !start && h.tracks[0] == ob.tracklet;
    case HypothesisKind::Noise: return h.tracks[0] == ob.tracklet;
    case HypothesisKind::Occludes:
    case HypothesisKind::MissingDet:
      return start ? h.tracks[1] == ob.tracklet : h.tracks[0] == ob.tracklet;
    default: return false;
  }
}

class Enumerator {
public:
  Enumerator(const CandidateSet& set, std::span<const Tracklet> tracks, const CostWeights& w)
      : set_(set), tracks_(tracks), w_(w), pick_(set.obligations.size(), nullptr) {
    for (const Hypothesis& b : set.beliefs) {
      if (b.kind == HypothesisKind::BelongsTo) persons_[b.tracks[0]].push_back(b);
    }
    for (auto& [face, hs] : persons_) {
      std::sort(hs.begin(), hs.end());
      hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
      faces_.push_back(face);
    }
  }

  void run() { assign(0); }

  std::vector<std::pair<double, std::vector<Hypothesis>>> models;

private:
  // Every obligation the hypothesis explains must pick that same hypothesis.
  bool agrees(std::size_t upto, const Hypothesis& h) const {
    for (std::size_t j = 0; j < upto; ++j) {
      if (explains(h, set_.obligations[j]) && *pick_[j] != h) return false;
      if (explains(*pick_[j], set_.obligations[upto]) && *pick_[j] != h) return false;
    }
    return true;
  }

  void assign(std::size_t i) {
    if (i == set_.obligations.size()) {
      leaf();
      return;
    }
    for (const Hypothesis& h : set_.per_obligation[i]) {
      if (!explains(h, set_.obligations[i]) || !agrees(i, h)) continue;
      pick_[i] = &h;
      assign(i + 1);
    }
    pick_[i] = nullptr;
  }

  void leaf() {
    std::vector<Hypothesis> events;
    for (const Hypothesis* h : pick_) {
      if (std::find(events.begin(), events.end(), *h) == events.end()) events.push_back(*h);
    }
    // Each chosen hypothesis must be selected at every obligation it explains.
    for (const Hypothesis& h : events) {
      for (std::size_t j = 0; j < pick_.size(); ++j) {
        if (explains(h, set_.obligations[j]) && *pick_[j] != h) return;
      }
    }
    std::vector<int> noisy;
    for (const Hypothesis& h : events) {
      if (h.kind == HypothesisKind::Noise) noisy.push_back(h.tracks[0]);
    }
    const auto is_noise = [&](int id) { return std::find(noisy.begin(), noisy.end(), id) != noisy.end(); };
    for (const Hypothesis& h : events) {
      if (h.kind == HypothesisKind::Occludes && is_noise(h.tracks[2])) return;
    }
    for (const Hypothesis& h : std::vector<Hypothesis>(events)) {
      if (h.is_link()) events.push_back(Hypothesis::same_object(h.tracks[0], h.tracks[1]));
    }
    beliefs(events, 0, is_noise);
  }

  template <typename IsNoise>
  void beliefs(std::vector<Hypothesis>& chosen, std::size_t k, const IsNoise& is_noise) {
    if (k == faces_.size()) {
      std::vector<Hypothesis> m = chosen;
      std::sort(m.begin(), m.end());
      models.emplace_back(explanation_cost(m, tracks_, w_), std::move(m));
      return;
    }
    const int face = faces_[k];
    std::vector<const Hypothesis*> admissible;
    if (!is_noise(face)) {
      for (const Hypothesis& b : persons_.at(face)) {
        if (!is_noise(b.tracks[1])) admissible.push_back(&b);
      }
    }
    // Option "none" is consistent only when no admissible person exists.
    if (admissible.empty()) {
      beliefs(chosen, k + 1, is_noise);
      return;
    }
    for (const Hypothesis* b : admissible) {
      chosen.push_back(*b);
      beliefs(chosen, k + 1, is_noise);
      chosen.pop_back();
    }
  }

  const CandidateSet& set_;
  std::span<const Tracklet> tracks_;
  const CostWeights& w_;
  std::vector<const Hypothesis*> pick_;
  std::map<int, std::vector<Hypothesis>> persons_;
  std::vector<int> faces_;
};

}  // namespace

SolveResult brute_force_solve(const CandidateSet& candidates, std::span<const Tracklet> tracks,
                              const CostWeights& w, SolveLimits limits) {
  if (candidates.obligations.size() > kBruteForceMaxObligations) {
    throw PreconditionError("brute_force_solve: more than " + std::to_string(kBruteForceMaxObligations) +
                            " obligations");
  }
  validate_candidates(candidates, tracks);

  Enumerator en(candidates, tracks, w);
  en.run();

  SolveResult result;
  if (en.models.empty()) throw PreconditionError("no consistent explanation exists");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [c, m] : en.models) best = std::min(best, c);
  result.optimal_cost = best;
  for (auto& [c, m] : en.models) {
    if (!same_cost(c, best)) continue;
    Explanation e;
    e.chosen = std::move(m);
    e.total_cost = c;
    result.optima.push_back(std::move(e));
  }
  std::sort(result.optima.begin(), result.optima.end(),
            [](const Explanation& a, const Explanation& b) { return a.chosen < b.chosen; });
  result.optima.erase(std::unique(result.optima.begin(), result.optima.end()), result.optima.end());
  result.nodes = en.models.size();
  if (result.optima.size() > limits.enumeration_cap) {
    result.status = SolveStatus::CapExceeded;
    result.optima.clear();
  }
  return result;
}

}  // namespace abtrack
