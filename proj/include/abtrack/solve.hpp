#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "abtrack/abduce.hpp"
#include "abtrack/config.hpp"
#include "abtrack/hypothesis.hpp"
#include "abtrack/tracklet.hpp"

namespace abtrack {

/// A consistent hypothesis selection, sorted canonically.
struct Explanation {
  std::vector<Hypothesis> chosen;
  double total_cost = 0.0;

  friend bool operator==(const Explanation&, const Explanation&) = default;
};

/// base(kind) + length weight(kind) * duration. Zero for SameObject,
/// BelongsTo and the PresentAt kinds.
double hypothesis_cost(const Hypothesis& h, const CostWeights& w);

/// Constant-velocity discrepancy of a link: w.motion * (|v1 - v_gap| + |v2 - v_gap|)
/// where v1/v2 are the mean center velocities over the last/first min(5, length)
/// frames of the two tracklets and v_gap bridges the junction boxes. A tracklet
/// of a single frame has no velocity and contributes nothing. Throws
/// PreconditionError for a non-link or a gap <= 0.
double motion_cost(const Hypothesis& link, std::span<const Tracklet> tracks, const CostWeights& w);

/// Cost of a hypothesis as charged by the solver (event cost plus motion cost for links).
double charged_cost(const Hypothesis& h, std::span<const Tracklet> tracks, const CostWeights& w);

/// Sum of charged costs over `chosen` in canonical order.
double explanation_cost(std::span<const Hypothesis> chosen, std::span<const Tracklet> tracks,
                        const CostWeights& w);

enum class SolveStatus { Optimal, CapExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  double optimal_cost = 0.0;
  /// All optimal explanations ordered lexicographically by their hypotheses.
  /// Empty when the cap was exceeded.
  std::vector<Explanation> optima;
  std::size_t nodes = 0;
};

struct SolveLimits {
  std::size_t enumeration_cap = 100000;
};

/// Two costs are the same optimum when they differ by at most this relative amount.
inline constexpr double kCostTieTolerance = 1e-9;
bool same_cost(double a, double b) noexcept;

/// Exact branch-and-bound over endpoint obligations. Constraints: every
/// obligation covered by exactly one hypothesis; a link covers the End of its
/// first and the Start of its second tracklet, Noise both endpoints of its
/// tracklet; an occluder is never Noise; a non-noise face with a non-noise
/// candidate person belongs to exactly one of them. Chosen links entail
/// SameObject. Throws PreconditionError when the candidate structure is
/// inconsistent (unmirrored links, missing Noise, uncovered obligation).
SolveResult solve(const CandidateSet& candidates, std::span<const Tracklet> tracks,
                  const CostWeights& w, SolveLimits limits = {});

/// Reference semantics for `solve` by exhaustive enumeration of consistent
/// selections. Throws PreconditionError with more than kBruteForceMaxObligations
/// obligations.
inline constexpr std::size_t kBruteForceMaxObligations = 14;
SolveResult brute_force_solve(const CandidateSet& candidates, std::span<const Tracklet> tracks,
                              const CostWeights& w, SolveLimits limits = {});

/// Throws PreconditionError describing the first structural problem found.
void validate_candidates(const CandidateSet& candidates, std::span<const Tracklet> tracks);

}  // namespace abtrack
