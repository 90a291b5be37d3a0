#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abtrack/abduce.hpp"
#include "abtrack/config.hpp"
#include "abtrack/error.hpp"
#include "abtrack/eval.hpp"
#include "abtrack/ingest.hpp"
#include "abtrack/solve.hpp"
#include "abtrack/synth.hpp"

namespace abtrack {

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

/// Everything one pass of ingest -> track -> abduce -> solve -> synth -> eval produces.
struct PipelineRun {
  SequenceMeta meta;
  Config config;
  std::vector<Tracklet> tracklets;
  CandidateSet candidates;
  SolveResult solution;
  std::vector<ObjectTrack> tracks;
  std::vector<ComplexEvent> events;
  std::optional<MotReport> report;           // with abduction
  std::optional<MotReport> baseline_report;  // raw tracklets, no abduction
  std::vector<StageTiming> timings;

  /// First optimum; the one used for track synthesis.
  const Explanation* selected() const noexcept {
    return solution.optima.empty() ? nullptr : &solution.optima.front();
  }
};

/// Failure of a named stage; what() reads "<stage>: <cause>".
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

/// Runs all stages in memory. `gt` enables the evaluation stage.
/// Throws StageError; a solver cap overflow is reported as a solve failure.
PipelineRun run_pipeline(std::span<const Detection> detections, const SequenceMeta& meta,
                         const Config& cfg, std::span<const Detection> gt = {});

/// Stage from tracklets on (what `abduce` consumes from `track`'s output).
PipelineRun run_from_tracklets(std::vector<Tracklet> tracklets, const SequenceMeta& meta,
                               const Config& cfg);

/// Output files of a pipeline run, keyed by file name.
struct RunArtifacts {
  std::string tracklets_csv;
  std::string explanation_atoms;
  std::string tracks_csv;
  std::string tracks_provenance;
  std::optional<std::string> report;
};

RunArtifacts render_artifacts(const PipelineRun& run, bool all_optima);

/// `frame,id,observed|interpolated` per output box, ordered like tracks.csv.
std::string write_provenance(std::span<const ObjectTrack> tracks);

}  // namespace abtrack
