// abtrack: detections -> tracklets -> explanations -> corrected tracks -> CLEAR-MOT.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "abtrack/atoms.hpp"
#include "abtrack/config.hpp"
#include "abtrack/eval.hpp"
#include "abtrack/ingest.hpp"
#include "abtrack/pipeline.hpp"
#include "abtrack/render.hpp"
#include "abtrack/scene.hpp"
#include "abtrack/synth.hpp"
#include "abtrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace abtrack;

namespace {

struct Options {
  std::string det, gt, meta, config, out, hyp, tracklets, atoms, tracks, prov, svg, range;
  std::string scene = "crossing";
  std::uint64_t seed = 1;
  int objects = 2, frames = 107, occlusions = 1;
  std::optional<double> iou_threshold;
  std::optional<int> max_gap;
  std::optional<int> frame;
  bool all_optima = false;
};

// Runs `body`, turning any failure into a StageError named `stage`.
template <class F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

Config load_settings(const Options& o) {
  return stage("config", [&] {
    Config cfg = o.config.empty() ? Config{} : load_config(o.config);
    if (o.iou_threshold) cfg.iou_threshold = *o.iou_threshold;
    if (o.max_gap) cfg.max_gap = *o.max_gap;
    cfg.validate();
    return cfg;
  });
}

SequenceMeta load_sequence(const Options& o, const Config& cfg) {
  return stage("ingest", [&] { return load_meta(o.meta, cfg.border_margin); });
}

std::vector<Tracklet> load_tracklets(const std::string& path) {
  return stage("ingest", [&] { return tracklets_from_rows(load_mot_csv(path)); });
}

void write_file(const fs::path& path, const std::string& content) {
  stage("output", [&] {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("write to '" + path.string() + "' failed");
    return 0;
  });
}

fs::path out_dir(const Options& o) {
  if (o.out.empty()) throw StageError("output", "--out is required");
  return o.out;
}

// tracks.csv plus its provenance rows back into object tracks.
std::vector<ObjectTrack> load_object_tracks(const std::string& tracks_path, const std::string& prov_path) {
  return stage("ingest", [&] {
    std::vector<Tracklet> rows = tracklets_from_rows(load_mot_csv(tracks_path));
    std::map<std::pair<int, int>, Provenance> prov;
    if (!prov_path.empty()) {
      std::ifstream in(prov_path);
      if (!in) throw Error("cannot open '" + prov_path + "'");
      std::string line;
      std::size_t n = 0;
      while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string f, id, kind;
        if (!std::getline(fields, f, ',') || !std::getline(fields, id, ',') || !std::getline(fields, kind)) {
          throw ParseError(n, "expected frame,id,observed|interpolated");
        }
        if (kind != "observed" && kind != "interpolated") throw ParseError(n, "unknown provenance '" + kind + "'");
        prov[{std::stoi(id), std::stoi(f)}] = kind == "observed" ? Provenance::Observed : Provenance::Interpolated;
      }
    }
    std::vector<ObjectTrack> tracks;
    for (Tracklet& t : rows) {
      ObjectTrack o;
      o.id = t.id;
      o.class_label = t.class_label;
      o.first_frame = t.first_frame;
      o.boxes = std::move(t.boxes);
      for (int f = o.first_frame; f <= o.last_frame(); ++f) {
        const auto it = prov.find({o.id, f});
        o.provenance.push_back(it == prov.end() ? Provenance::Observed : it->second);
      }
      o.source_tracklets = {o.id};
      tracks.push_back(std::move(o));
    }
    return tracks;
  });
}

void run_gen(const Options& o) {
  const SyntheticScene scene = stage("gen", [&] {
    if (o.scene == "crossing") return crossing_scene(o.seed, o.objects, o.frames, o.occlusions);
    if (o.scene == "stress") return stress_scene(o.seed, o.objects, o.frames);
    throw Error("unknown scene '" + o.scene + "'");
  });
  const GeneratedSequence seq = stage("gen", [&] { return generate(scene); });
  const fs::path dir = out_dir(o);
  write_file(dir / "det.csv", write_detection_rows(seq.detections));
  write_file(dir / "gt.csv", write_detection_rows(seq.ground_truth));
  write_file(dir / "seq.meta", write_meta(seq.meta));
}

void run_track(const Options& o) {
  const Config cfg = load_settings(o);
  const SequenceMeta meta = load_sequence(o, cfg);
  const auto dets = stage("ingest", [&] { return load_mot_csv(o.det); });
  const auto tracklets = stage("track", [&] { return build_tracklets(dets, meta, cfg); });
  write_file(out_dir(o) / "tracklets.csv", write_mot_csv(tracklets));
}

void run_abduce(const Options& o) {
  const Config cfg = load_settings(o);
  const SequenceMeta meta = load_sequence(o, cfg);
  const PipelineRun run = run_from_tracklets(load_tracklets(o.tracklets), meta, cfg);
  write_file(out_dir(o) / "explanation.atoms", render_artifacts(run, o.all_optima).explanation_atoms);
}

void run_synth(const Options& o) {
  const Config cfg = load_settings(o);
  const auto tracklets = load_tracklets(o.tracklets);
  AtomDocument doc = stage("ingest", [&] {
    std::ifstream in(o.atoms);
    if (!in) throw Error("cannot open '" + o.atoms + "'");
    return parse_atoms(in);
  });
  if (doc.models.empty()) throw StageError("synth", "atom file holds no model");
  Explanation& expl = doc.models.front();
  const auto tracks = stage("synth", [&] {
    restore_noise_spans(expl, tracklets);
    return synthesize_tracks(expl, tracklets);
  });
  std::vector<Tracklet> rows;
  for (const ObjectTrack& t : tracks) rows.push_back(t.as_tracklet());
  const fs::path dir = out_dir(o);
  write_file(dir / "tracks.csv", write_mot_csv(rows));
  write_file(dir / "tracks.prov", write_provenance(tracks));
}

void run_eval(const Options& o) {
  const Config cfg = load_settings(o);
  const auto [hyp, gt] = stage("ingest", [&] {
    return std::pair{frame_boxes(std::span<const Detection>(load_mot_csv(o.hyp))),
                     frame_boxes(std::span<const Detection>(load_mot_csv(o.gt)))};
  });
  const MotReport r = stage("eval", [&] { return clear_mot(hyp, gt, cfg.iou_threshold); });
  const std::string text = format_report_kv(r);
  std::cout << text;
  if (!o.out.empty()) write_file(fs::path(o.out) / "report.txt", text);
}

void run_full(const Options& o) {
  const Config cfg = load_settings(o);
  const SequenceMeta meta = load_sequence(o, cfg);
  const auto dets = stage("ingest", [&] { return load_mot_csv(o.det); });
  const auto gt = o.gt.empty() ? std::vector<Detection>{} : stage("ingest", [&] { return load_mot_csv(o.gt); });
  const PipelineRun run = run_pipeline(dets, meta, cfg, gt);
  const RunArtifacts a = render_artifacts(run, o.all_optima);
  const fs::path dir = out_dir(o);
  write_file(dir / "tracklets.csv", a.tracklets_csv);
  write_file(dir / "explanation.atoms", a.explanation_atoms);
  write_file(dir / "tracks.csv", a.tracks_csv);
  write_file(dir / "tracks.prov", a.tracks_provenance);
  if (a.report) {
    write_file(dir / "report.txt", *a.report);
    std::cout << format_report_table(*run.report, "with abduction");
    if (run.baseline_report) std::cout << format_report_table(*run.baseline_report, "without abduction");
  }
  for (const StageTiming& t : run.timings) std::cerr << t.stage << ": " << t.milliseconds << " ms\n";
}

void run_render(const Options& o) {
  const Config cfg = load_settings(o);
  const SequenceMeta meta = load_sequence(o, cfg);
  const auto tracks = load_object_tracks(o.tracks, o.prov);
  int first = 1, last = meta.frame_count;
  if (o.frame) {
    first = last = *o.frame;
  } else if (!o.range.empty()) {
    const auto dash = o.range.find('-');
    if (dash == std::string::npos) throw StageError("render", "--range expects FIRST-LAST");
    try {
      first = std::stoi(o.range.substr(0, dash));
      last = std::stoi(o.range.substr(dash + 1));
    } catch (const std::exception&) {
      throw StageError("render", "--range expects FIRST-LAST");
    }
  }
  const std::string svg = stage("render", [&] { return render_overlay(tracks, meta, first, last); });
  if (o.svg.empty()) {
    std::cout << svg;
  } else {
    write_file(o.svg, svg);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Abductive multi-object tracking"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Key = value config file");
    sub->add_option("--iou-threshold", o.iou_threshold, "CLEAR-MOT match threshold");
    sub->add_option("--max-gap", o.max_gap, "Longest gap a link may bridge (frames)");
  };

  auto* gen = app.add_subcommand("gen", "Write a synthetic sequence (det.csv, gt.csv, seq.meta)");
  gen->add_option("--seed", o.seed);
  gen->add_option("--objects", o.objects);
  gen->add_option("--frames", o.frames);
  gen->add_option("--occlusions", o.occlusions);
  gen->add_option("--scene", o.scene)->check(CLI::IsMember({"crossing", "stress"}));
  gen->add_option("--out", o.out)->required();

  auto* track = app.add_subcommand("track", "Detections to tracklets.csv");
  track->add_option("--det", o.det)->required();
  track->add_option("--meta", o.meta)->required();
  track->add_option("--out", o.out)->required();
  common(track);

  auto* abduce = app.add_subcommand("abduce", "Tracklets to explanation.atoms");
  abduce->add_option("--tracklets", o.tracklets)->required();
  abduce->add_option("--meta", o.meta)->required();
  abduce->add_option("--out", o.out)->required();
  abduce->add_flag("--all-optima", o.all_optima, "Write every optimal model");
  common(abduce);

  auto* synth = app.add_subcommand("synth", "Tracklets and atoms to tracks.csv and tracks.prov");
  synth->add_option("--tracklets", o.tracklets)->required();
  synth->add_option("--atoms", o.atoms)->required();
  synth->add_option("--out", o.out)->required();
  common(synth);

  auto* eval = app.add_subcommand("eval", "CLEAR-MOT of a hypothesis file against ground truth");
  eval->add_option("--hyp", o.hyp)->required();
  eval->add_option("--gt", o.gt)->required();
  eval->add_option("--out", o.out);
  common(eval);

  auto* pipeline = app.add_subcommand("pipeline", "All stages; evaluates when --gt is given");
  pipeline->add_option("--det", o.det)->required();
  pipeline->add_option("--meta", o.meta)->required();
  pipeline->add_option("--gt", o.gt);
  pipeline->add_option("--out", o.out)->required();
  pipeline->add_flag("--all-optima", o.all_optima, "Write every optimal model");
  common(pipeline);

  auto* render = app.add_subcommand("render", "SVG overlay of tracks");
  render->add_option("--tracks", o.tracks)->required();
  render->add_option("--prov", o.prov);
  render->add_option("--meta", o.meta)->required();
  auto* frame_opt = render->add_option("--frame", o.frame);
  render->add_option("--range", o.range, "FIRST-LAST")->excludes(frame_opt);
  render->add_option("--svg", o.svg, "Output file (stdout when absent)");
  common(render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) run_gen(o);
    else if (track->parsed()) run_track(o);
    else if (abduce->parsed()) run_abduce(o);
    else if (synth->parsed()) run_synth(o);
    else if (eval->parsed()) run_eval(o);
    else if (pipeline->parsed()) run_full(o);
    else if (render->parsed()) run_render(o);
  } catch (const StageError& e) {
    std::cerr << "abtrack: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "abtrack: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
