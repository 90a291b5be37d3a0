#pragma once

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "abtrack/solve.hpp"
#include "abtrack/synth.hpp"

namespace abtrack {

/// Parsed explanation file.
struct AtomDocument {
  std::vector<Explanation> models;
  std::vector<ComplexEvent> events;
  std::size_t total_models = 0;
};

/// One block per model, each introduced by `% model i/N cost = C`, followed by
/// one ground atom per line. Complex events, when given, follow the first
/// model's hypotheses. `total_models` is N (it may exceed models.size() when
/// only the selected model is written).
std::string write_atoms(std::span<const Explanation> models, std::size_t total_models,
                        std::span<const ComplexEvent> events = {});

/// Throws ParseError with the offending line number.
AtomDocument parse_atoms(std::istream& in);

ComplexEvent parse_complex_event_atom(std::string_view text);

/// `noise(trkN).` carries no frames; refill Noise spans from the tracklets
/// and restore canonical order.
void restore_noise_spans(Explanation& expl, std::span<const Tracklet> tracks);

}  // namespace abtrack
