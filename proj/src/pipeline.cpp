#include "abtrack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <type_traits>
#include <utility>

#include "abtrack/atoms.hpp"
#include "abtrack/tracker.hpp"

namespace abtrack {

namespace {

template <class F>
auto timed(PipelineRun& run, const char* stage, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      run.timings.push_back({stage, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()});
    } else {
      auto value = body();
      run.timings.push_back({stage, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()});
      return value;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void explain(PipelineRun& run) {
  run.candidates = timed(run, "abduce", [&] { return abduce_candidates(run.tracklets, run.meta, run.config); });
  run.solution = timed(run, "solve", [&] {
    SolveResult r = solve(run.candidates, run.tracklets, run.config.weights, {run.config.enumeration_cap});
    if (r.status == SolveStatus::CapExceeded) {
      throw StageError("solve", "more than " + std::to_string(run.config.enumeration_cap) +
                                    " optimal explanations; raise enumeration_cap");
    }
    if (r.optima.empty()) throw StageError("solve", "no consistent explanation");
    return r;
  });
  timed(run, "synth", [&] {
    run.tracks = synthesize_tracks(*run.selected(), run.tracklets);
    run.events = detect_complex_events(*run.selected(), run.tracks, run.config);
  });
}

}  // namespace

PipelineRun run_from_tracklets(std::vector<Tracklet> tracklets, const SequenceMeta& meta, const Config& cfg) {
  PipelineRun run;
  run.meta = meta;
  run.config = cfg;
  timed(run, "config", [&] { cfg.validate(); });
  run.tracklets = std::move(tracklets);
  explain(run);
  return run;
}

PipelineRun run_pipeline(std::span<const Detection> detections, const SequenceMeta& meta, const Config& cfg,
                         std::span<const Detection> gt) {
  PipelineRun run;
  run.meta = meta;
  run.config = cfg;
  timed(run, "config", [&] { cfg.validate(); });
  run.tracklets = timed(run, "track", [&] { return build_tracklets(detections, meta, cfg); });
  explain(run);
  if (!gt.empty()) {
    timed(run, "eval", [&] {
      const std::vector<FrameBox> truth = frame_boxes(gt);
      run.report = clear_mot(frame_boxes(std::span<const ObjectTrack>(run.tracks)), truth, cfg.iou_threshold);
      run.baseline_report = clear_mot(frame_boxes(std::span<const Tracklet>(run.tracklets)), truth, cfg.iou_threshold);
    });
  }
  return run;
}

std::string write_provenance(std::span<const ObjectTrack> tracks) {
  struct Row {
    int frame;
    int id;
    Provenance p;
  };
  std::vector<Row> rows;
  for (const ObjectTrack& t : tracks) {
    for (std::size_t i = 0; i < t.boxes.size(); ++i) {
      rows.push_back({t.first_frame + static_cast<int>(i), t.id, t.provenance[i]});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::string out;
  for (const Row& r : rows) {
    out += std::to_string(r.frame) + ',' + std::to_string(r.id) + ',' +
           (r.p == Provenance::Observed ? "observed" : "interpolated") + '\n';
  }
  return out;
}

RunArtifacts render_artifacts(const PipelineRun& run, bool all_optima) {
  RunArtifacts a;
  a.tracklets_csv = write_mot_csv(run.tracklets);
  const auto& optima = run.solution.optima;
  const std::span<const Explanation> models =
      all_optima ? std::span<const Explanation>(optima) : std::span<const Explanation>(optima).first(std::min<std::size_t>(1, optima.size()));
  a.explanation_atoms = write_atoms(models, optima.size(), run.events);
  std::vector<Tracklet> as_rows;
  as_rows.reserve(run.tracks.size());
  for (const ObjectTrack& t : run.tracks) as_rows.push_back(t.as_tracklet());
  a.tracks_csv = write_mot_csv(as_rows);
  a.tracks_provenance = write_provenance(run.tracks);
  if (run.report) {
    a.report = "[with_abduction]\n" + format_report_kv(*run.report);
    if (run.baseline_report) *a.report += "\n[without_abduction]\n" + format_report_kv(*run.baseline_report);
  }
  return a;
}

}  // namespace abtrack
