#include "abtrack/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "abtrack/error.hpp"

namespace abtrack {

namespace {

std::string describe(const Hypothesis& h) { return to_atom(h); }

struct ObKey {
  int track = 0;
  Endpoint which = Endpoint::Start;
  friend auto operator<=>(const ObKey&, const ObKey&) = default;
};

// Obligations a hypothesis accounts for.
std::vector<ObKey> covered_by(const Hypothesis& h) {
  switch (h.kind) {
    case HypothesisKind::Enters:
    case HypothesisKind::PresentAtStart: return {{h.tracks[0], Endpoint::Start}};
    case HypothesisKind::Exits:
    case HypothesisKind::PresentAtEnd: return {{h.tracks[0], Endpoint::End}};
    case HypothesisKind::Noise: return {{h.tracks[0], Endpoint::Start}, {h.tracks[0], Endpoint::End}};
    case HypothesisKind::Occludes:
    case HypothesisKind::MissingDet: return {{h.tracks[0], Endpoint::End}, {h.tracks[1], Endpoint::Start}};
    default: return {};
  }
}

std::map<int, std::size_t> index_tracks(std::span<const Tracklet> tracks) {
  std::map<int, std::size_t> idx;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (!idx.emplace(tracks[i].id, i).second) {
      throw PreconditionError("duplicate tracklet id " + std::to_string(tracks[i].id));
    }
  }
  return idx;
}

}  // namespace

void validate_candidates(const CandidateSet& set, std::span<const Tracklet> tracks) {
  if (set.obligations.size() != set.per_obligation.size()) {
    throw PreconditionError("candidate lists do not match the obligations");
  }
  const auto tidx = index_tracks(tracks);
  std::map<ObKey, std::size_t> ob_index;
  for (std::size_t i = 0; i < set.obligations.size(); ++i) {
    const EndpointObligation& ob = set.obligations[i];
    const auto it = tidx.find(ob.tracklet);
    if (it == tidx.end()) throw PreconditionError("obligation for unknown tracklet " + std::to_string(ob.tracklet));
    const Tracklet& t = tracks[it->second];
    if (ob.frame != (ob.which == Endpoint::Start ? t.first_frame : t.last_frame())) {
      throw PreconditionError("obligation frame mismatch for tracklet " + std::to_string(ob.tracklet));
    }
    if (!ob_index.emplace(ObKey{ob.tracklet, ob.which}, i).second) {
      throw PreconditionError("duplicate obligation for tracklet " + std::to_string(ob.tracklet));
    }
  }
  for (std::size_t i = 0; i < set.obligations.size(); ++i) {
    const ObKey self{set.obligations[i].tracklet, set.obligations[i].which};
    if (set.per_obligation[i].empty()) {
      throw PreconditionError("obligation of tracklet " + std::to_string(self.track) + " has no candidate");
    }
    for (const Hypothesis& h : set.per_obligation[i]) {
      const auto covers = covered_by(h);
      if (covers.empty()) throw PreconditionError(describe(h) + " is not an endpoint hypothesis");
      if (std::find(covers.begin(), covers.end(), self) == covers.end()) {
        throw PreconditionError(describe(h) + " does not explain the obligation it is listed under");
      }
      for (const ObKey& other : covers) {
        const auto it = ob_index.find(other);
        if (it == ob_index.end()) {
          throw PreconditionError(describe(h) + " refers to an obligation that is not part of the problem");
        }
        const auto& list = set.per_obligation[it->second];
        if (std::find(list.begin(), list.end(), h) == list.end()) {
          throw PreconditionError(describe(h) + " is not mirrored at both endpoints it explains");
        }
      }
      if (h.kind == HypothesisKind::Occludes && !tidx.contains(h.tracks[2])) {
        throw PreconditionError(describe(h) + " names an unknown occluder");
      }
    }
  }
  for (const Hypothesis& b : set.beliefs) {
    if (b.kind != HypothesisKind::BelongsTo && b.kind != HypothesisKind::SameObject) {
      throw PreconditionError(describe(b) + " is not a belief");
    }
    if (!tidx.contains(b.tracks[0]) || !tidx.contains(b.tracks[1])) {
      throw PreconditionError(describe(b) + " names an unknown tracklet");
    }
  }
}

namespace {

struct Option {
  Hypothesis h;
  double cost = 0.0;
  double share = 0.0;  // cost spread evenly over the covered obligations
  std::vector<std::size_t> obligations;
  std::ptrdiff_t noise_track = -1;  // tracklet index when h is Noise
  std::ptrdiff_t occluder = -1;     // tracklet index when h is Occludes
};

struct Problem {
  std::span<const Tracklet> tracks;
  const CostWeights* weights = nullptr;
  std::vector<Option> options;
  std::vector<std::vector<std::size_t>> options_of;  // per obligation, cheapest first
  std::vector<std::size_t> track_of;                 // obligation -> tracklet index
  std::vector<Endpoint> side_of;
  std::map<std::size_t, std::vector<std::size_t>> persons_of_face;  // tracklet indices
};

Problem build_problem(const CandidateSet& set, std::span<const Tracklet> tracks, const CostWeights& w) {
  Problem p;
  p.tracks = tracks;
  p.weights = &w;
  const auto tidx = index_tracks(tracks);
  std::map<ObKey, std::size_t> ob_index;
  for (std::size_t i = 0; i < set.obligations.size(); ++i) {
    ob_index[{set.obligations[i].tracklet, set.obligations[i].which}] = i;
    p.track_of.push_back(tidx.at(set.obligations[i].tracklet));
    p.side_of.push_back(set.obligations[i].which);
  }
  std::map<Hypothesis, std::size_t> seen;
  p.options_of.resize(set.obligations.size());
  for (std::size_t i = 0; i < set.obligations.size(); ++i) {
    for (const Hypothesis& h : set.per_obligation[i]) {
      auto [it, fresh] = seen.emplace(h, p.options.size());
      if (fresh) {
        Option o;
        o.h = h;
        o.cost = charged_cost(h, tracks, w);
        for (const ObKey& k : covered_by(h)) o.obligations.push_back(ob_index.at(k));
        o.share = o.cost / static_cast<double>(o.obligations.size());
        if (h.kind == HypothesisKind::Noise) o.noise_track = static_cast<std::ptrdiff_t>(tidx.at(h.tracks[0]));
        if (h.kind == HypothesisKind::Occludes) o.occluder = static_cast<std::ptrdiff_t>(tidx.at(h.tracks[2]));
        p.options.push_back(std::move(o));
      }
      p.options_of[i].push_back(it->second);
    }
  }
  for (auto& list : p.options_of) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      const Option& oa = p.options[a];
      const Option& ob = p.options[b];
      return oa.cost != ob.cost ? oa.cost < ob.cost : oa.h < ob.h;
    });
  }
  for (const Hypothesis& b : set.beliefs) {
    if (b.kind != HypothesisKind::BelongsTo) continue;
    p.persons_of_face[tidx.at(b.tracks[0])].push_back(tidx.at(b.tracks[1]));
  }
  for (auto& [face, persons] : p.persons_of_face) {
    std::sort(persons.begin(), persons.end(), [&](std::size_t a, std::size_t b) { return tracks[a].id < tracks[b].id; });
    persons.erase(std::unique(persons.begin(), persons.end()), persons.end());
  }
  return p;
}

// Min-cost perfect assignment on a dense square matrix, O(n^3) with potentials.
double assignment_value(const std::vector<double>& a, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) total += a[(match[j] - 1) * n + (j - 1)];
  return total;
}

// Disjoint-set over obligations.
struct Components {
  std::vector<std::size_t> parent;
  explicit Components(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Obligations that must be decided together: shared hypotheses, occluder
// noise exclusion and face/person exclusivity couple them.
std::vector<std::vector<std::size_t>> split_components(const Problem& p) {
  const std::size_t n = p.options_of.size();
  Components dsu(n);
  std::map<std::size_t, std::vector<std::size_t>> obligations_of_track;
  for (std::size_t i = 0; i < n; ++i) obligations_of_track[p.track_of[i]].push_back(i);
  const auto unite_tracks = [&](std::size_t ta, std::size_t tb) {
    const auto& a = obligations_of_track[ta];
    const auto& b = obligations_of_track[tb];
    if (!a.empty() && !b.empty()) dsu.unite(a.front(), b.front());
  };
  for (const auto& [track, obs] : obligations_of_track) {
    for (std::size_t o : obs) dsu.unite(o, obs.front());
  }
  for (const Option& o : p.options) {
    for (std::size_t k = 1; k < o.obligations.size(); ++k) dsu.unite(o.obligations[0], o.obligations[k]);
    if (o.occluder >= 0) unite_tracks(p.track_of[o.obligations[0]], static_cast<std::size_t>(o.occluder));
  }
  for (const auto& [face, persons] : p.persons_of_face) {
    for (std::size_t person : persons) unite_tracks(face, person);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[dsu.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

class BranchAndBound {
public:
  BranchAndBound(const Problem& p, std::vector<std::size_t> obligations, std::size_t cap)
      : p_(p), obligations_(std::move(obligations)), cap_(cap),
        covered_(p.options_of.size(), 0), noise_(p.tracks.size(), 0), occluder_uses_(p.tracks.size(), 0),
        slot_(p.options_of.size(), 0) {
    for (std::size_t ob : obligations_) (p.side_of[ob] == Endpoint::End ? ends_ : starts_).push_back(ob);
  }

  void run() { expand(0.0); }

  const std::vector<std::vector<std::size_t>>& selections() const { return stored_; }
  bool overflowed() const { return overflow_; }
  std::size_t nodes() const { return nodes_; }

private:
  bool feasible(const Option& o) const {
    for (std::size_t ob : o.obligations) {
      if (covered_[ob]) return false;
    }
    if (o.noise_track >= 0 && occluder_uses_[static_cast<std::size_t>(o.noise_track)] > 0) return false;
    if (o.occluder >= 0 && noise_[static_cast<std::size_t>(o.occluder)]) return false;
    return true;
  }

  // Admissible: each open obligation pays at least the cheapest share of an
  // option that could still cover it.
  bool lower_bound(double& bound, std::size_t& branch_on) const {
    bound = 0.0;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    branch_on = obligations_.size();
    for (std::size_t k = 0; k < obligations_.size(); ++k) {
      const std::size_t ob = obligations_[k];
      if (covered_[ob]) continue;
      double cheapest = std::numeric_limits<double>::infinity();
      std::size_t count = 0;
      for (std::size_t oi : p_.options_of[ob]) {
        const Option& o = p_.options[oi];
        if (!feasible(o)) continue;
        ++count;
        cheapest = std::min(cheapest, o.share);
      }
      if (count == 0) return false;
      bound += cheapest;
      if (count < fewest) {
        fewest = count;
        branch_on = k;
      }
    }
    return true;
  }

  // Tighter admissible bound. Dropping the noise/occluder exclusions leaves
  // a bipartite problem: each open end either links to an open start or
  // pays its cheapest standalone option, and likewise for starts. Noise pays
  // half its cost at each endpoint. Returns false when nothing completes.
  bool assignment_bound(double& bound) {
    constexpr double kBlocked = 1e12;
    std::vector<std::size_t> open_ends, open_starts;
    for (std::size_t ob : ends_) {
      if (!covered_[ob]) {
        slot_[ob] = open_ends.size();
        open_ends.push_back(ob);
      }
    }
    for (std::size_t ob : starts_) {
      if (!covered_[ob]) {
        slot_[ob] = open_starts.size();
        open_starts.push_back(ob);
      }
    }
    const std::size_t ne = open_ends.size(), ns = open_starts.size(), n = ne + ns;
    if (n == 0) {
      bound = 0.0;
      return true;
    }
    matrix_.assign(n * n, kBlocked);
    const auto standalone = [&](std::size_t ob) {
      double best = kBlocked;
      for (std::size_t oi : p_.options_of[ob]) {
        const Option& o = p_.options[oi];
        if (o.h.is_link() || !feasible(o)) continue;
        best = std::min(best, o.share);
      }
      return best;
    };
    for (std::size_t r = 0; r < ne; ++r) {
      const std::size_t ob = open_ends[r];
      for (std::size_t oi : p_.options_of[ob]) {
        const Option& o = p_.options[oi];
        if (!o.h.is_link() || o.obligations[0] != ob || !feasible(o)) continue;
        double& cell = matrix_[r * n + slot_[o.obligations[1]]];
        cell = std::min(cell, o.cost);
      }
      matrix_[r * n + ns + r] = standalone(ob);
    }
    for (std::size_t c = 0; c < ns; ++c) {
      const std::size_t r = ne + c;
      matrix_[r * n + c] = standalone(open_starts[c]);
      for (std::size_t d = 0; d < ne; ++d) matrix_[r * n + ns + d] = 0.0;
    }
    bound = assignment_value(matrix_, n);
    return bound < kBlocked / 2;
  }

  void apply(const Option& o, int sign) {
    for (std::size_t ob : o.obligations) covered_[ob] = sign > 0;
    if (o.noise_track >= 0) noise_[static_cast<std::size_t>(o.noise_track)] = sign > 0;
    if (o.occluder >= 0) occluder_uses_[static_cast<std::size_t>(o.occluder)] += sign;
  }

  void record(double cost) {
    if (!std::isfinite(best_) || (cost < best_ && !same_cost(cost, best_))) {
      best_ = cost;
      std::vector<std::vector<std::size_t>> kept;
      std::vector<double> kept_costs;
      for (std::size_t i = 0; i < stored_.size(); ++i) {
        if (same_cost(stored_costs_[i], best_)) {
          kept.push_back(std::move(stored_[i]));
          kept_costs.push_back(stored_costs_[i]);
        }
      }
      stored_ = std::move(kept);
      stored_costs_ = std::move(kept_costs);
      overflow_ = false;
    } else if (!same_cost(cost, best_)) {
      return;
    }
    if (stored_.size() >= cap_) {
      overflow_ = true;
      return;
    }
    stored_.push_back(stack_);
    stored_costs_.push_back(cost);
  }

  void expand(double cost) {
    ++nodes_;
    double bound = 0.0;
    std::size_t branch_on = 0;
    if (!lower_bound(bound, branch_on)) return;
    const double optimistic = cost + bound;
    if (std::isfinite(best_) && optimistic > best_ && !same_cost(optimistic, best_)) return;
    if (branch_on != obligations_.size() && std::isfinite(best_)) {
      double tight = 0.0;
      if (!assignment_bound(tight)) return;
      const double sharper = cost + tight;
      if (sharper > best_ && !same_cost(sharper, best_)) return;
    }
    if (branch_on == obligations_.size()) {
      record(cost);
      return;
    }
    for (std::size_t oi : p_.options_of[obligations_[branch_on]]) {
      const Option& o = p_.options[oi];
      if (!feasible(o)) continue;
      apply(o, +1);
      stack_.push_back(oi);
      expand(cost + o.cost);
      stack_.pop_back();
      apply(o, -1);
    }
  }

  const Problem& p_;
  std::vector<std::size_t> obligations_;
  std::size_t cap_;
  std::vector<char> covered_;
  std::vector<char> noise_;
  std::vector<int> occluder_uses_;
  std::vector<std::size_t> ends_, starts_;  // component obligations by endpoint side
  std::vector<std::size_t> slot_;
  std::vector<double> matrix_;
  std::vector<std::size_t> stack_;
  std::vector<std::vector<std::size_t>> stored_;
  std::vector<double> stored_costs_;
  double best_ = std::numeric_limits<double>::infinity();
  bool overflow_ = false;
  std::size_t nodes_ = 0;
};

// Event selection -> hypotheses, with entailed SameObject and every admissible
// face assignment. Returns false when the number of models exceeds `cap`.
bool expand_models(const Problem& p, const std::vector<std::size_t>& selection,
                   const std::vector<std::size_t>& faces, std::size_t cap,
                   std::vector<std::vector<Hypothesis>>& out) {
  std::vector<Hypothesis> base;
  std::vector<char> noise(p.tracks.size(), 0);
  for (std::size_t oi : selection) {
    const Option& o = p.options[oi];
    base.push_back(o.h);
    if (o.h.is_link()) base.push_back(Hypothesis::same_object(o.h.tracks[0], o.h.tracks[1]));
    if (o.noise_track >= 0) noise[static_cast<std::size_t>(o.noise_track)] = 1;
  }
  std::vector<std::vector<Hypothesis>> partial{base};
  for (std::size_t face : faces) {
    if (noise[face]) continue;
    std::vector<Hypothesis> choices;
    for (std::size_t person : p.persons_of_face.at(face)) {
      if (!noise[person]) choices.push_back(Hypothesis::belongs_to(p.tracks[face].id, p.tracks[person].id));
    }
    if (choices.empty()) continue;
    std::vector<std::vector<Hypothesis>> next;
    for (const auto& m : partial) {
      for (const Hypothesis& c : choices) {
        if (out.size() + next.size() >= cap) return false;
        next.push_back(m);
        next.back().push_back(c);
      }
    }
    partial = std::move(next);
  }
  for (auto& m : partial) {
    if (out.size() >= cap) return false;
    std::sort(m.begin(), m.end());
    out.push_back(std::move(m));
  }
  return true;
}

struct ComponentModels {
  std::vector<std::vector<Hypothesis>> models;
  std::vector<double> costs;
};

}  // namespace

SolveResult solve(const CandidateSet& candidates, std::span<const Tracklet> tracks, const CostWeights& w,
                  SolveLimits limits) {
  validate_candidates(candidates, tracks);
  if (!w.valid()) throw PreconditionError("cost weights must be finite and >= 0");
  const Problem p = build_problem(candidates, tracks, w);

  SolveResult result;
  const auto cap_exceeded = [&](double cost) {
    result.status = SolveStatus::CapExceeded;
    result.optimal_cost = cost;
    result.optima.clear();
    return result;
  };

  std::vector<ComponentModels> parts;
  double total_cost = 0.0;
  for (const auto& component : split_components(p)) {
    BranchAndBound search(p, component, limits.enumeration_cap);
    search.run();
    result.nodes += search.nodes();

    std::vector<std::size_t> faces;
    for (std::size_t ob : component) {
      const std::size_t t = p.track_of[ob];
      if (p.persons_of_face.contains(t) && std::find(faces.begin(), faces.end(), t) == faces.end()) faces.push_back(t);
    }
    std::sort(faces.begin(), faces.end(), [&](std::size_t a, std::size_t b) { return tracks[a].id < tracks[b].id; });

    ComponentModels cm;
    bool within_cap = !search.overflowed();
    for (const auto& sel : search.selections()) {
      if (!within_cap) break;
      within_cap = expand_models(p, sel, faces, limits.enumeration_cap, cm.models);
    }
    for (const auto& m : cm.models) cm.costs.push_back(explanation_cost(m, tracks, w));
    const double best = cm.costs.empty() ? 0.0 : *std::min_element(cm.costs.begin(), cm.costs.end());
    total_cost += best;
    if (!within_cap) return cap_exceeded(total_cost);
    if (cm.models.empty()) throw PreconditionError("no consistent explanation exists");

    ComponentModels kept;
    for (std::size_t i = 0; i < cm.models.size(); ++i) {
      if (same_cost(cm.costs[i], best)) {
        kept.models.push_back(std::move(cm.models[i]));
        kept.costs.push_back(cm.costs[i]);
      }
    }
    parts.push_back(std::move(kept));
  }

  std::size_t count = 1;
  for (const auto& part : parts) {
    if (count > limits.enumeration_cap / part.models.size()) return cap_exceeded(total_cost);
    count *= part.models.size();
  }
  if (count > limits.enumeration_cap) return cap_exceeded(total_cost);

  std::vector<std::vector<Hypothesis>> combined{{}};
  for (const auto& part : parts) {
    std::vector<std::vector<Hypothesis>> next;
    next.reserve(combined.size() * part.models.size());
    for (const auto& prefix : combined) {
      for (const auto& m : part.models) {
        next.push_back(prefix);
        next.back().insert(next.back().end(), m.begin(), m.end());
      }
    }
    combined = std::move(next);
  }

  std::vector<Explanation> all;
  all.reserve(combined.size());
  for (auto& m : combined) {
    std::sort(m.begin(), m.end());
    Explanation e;
    e.total_cost = explanation_cost(m, tracks, w);
    e.chosen = std::move(m);
    all.push_back(std::move(e));
  }
  const double best = all.empty() ? 0.0
                                  : std::min_element(all.begin(), all.end(), [](const auto& a, const auto& b) {
                                      return a.total_cost < b.total_cost;
                                    })->total_cost;
  for (auto& e : all) {
    if (same_cost(e.total_cost, best)) result.optima.push_back(std::move(e));
  }
  std::sort(result.optima.begin(), result.optima.end(),
            [](const Explanation& a, const Explanation& b) { return a.chosen < b.chosen; });
  result.optimal_cost = best;
  return result;
}

}  // namespace abtrack
