#include "catch_amalgamated.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "abtrack/atoms.hpp"
#include "abtrack/error.hpp"
#include "abtrack/hypothesis.hpp"
#include "abtrack/pipeline.hpp"
#include "abtrack/render.hpp"
#include "abtrack/scene.hpp"
#include "support/fixtures.hpp"

using namespace abtrack;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

ObjectTrack object(int id, int first, std::vector<Box2D> boxes, std::vector<Provenance> prov) {
  ObjectTrack o;
  o.id = id;
  o.first_frame = first;
  o.boxes = std::move(boxes);
  o.provenance = std::move(prov);
  o.source_tracklets = {id};
  return o;
}

}  // namespace

TEST_CASE("atoms have the documented shapes", "[atoms]") {
  CHECK(to_atom(Hypothesis::occludes(3, 7, 5, 102, 143)) == "occludes(trk3,trk7,trk5,102,143).");
  CHECK(to_atom(Hypothesis::enters(Border::Left, 1, 17)) == "enters(left,trk1,17).");
  CHECK(to_atom(Hypothesis::exits(Border::Bottom, 2, 40)) == "exits(bottom,trk2,40).");
  CHECK(to_atom(Hypothesis::noise(9, 3, 4)) == "noise(trk9).");
  CHECK(to_atom(Hypothesis::missing_det(1, 2, 10, 14)) == "missing_det(trk1,trk2,10,14).");
  CHECK(to_atom(Hypothesis::same_object(1, 2)) == "same_object(trk1,trk2).");
  CHECK(to_atom(Hypothesis::belongs_to(4, 2)) == "belongs_to(trk4,trk2).");
  CHECK(to_atom(Hypothesis::present_at_start(1, 1)) == "present_at_start(trk1,1).");
  CHECK(to_atom(Hypothesis::present_at_end(1, 90)) == "present_at_end(trk1,90).");
}

TEST_CASE("atoms parse back", "[atoms]") {
  for (const Hypothesis& h : {Hypothesis::occludes(3, 7, 5, 102, 143), Hypothesis::enters(Border::Top, 1, 17),
                              Hypothesis::exits(Border::Right, 2, 40), Hypothesis::missing_det(1, 2, 10, 14),
                              Hypothesis::same_object(1, 2), Hypothesis::belongs_to(4, 2),
                              Hypothesis::present_at_start(1, 1), Hypothesis::present_at_end(1, 90)}) {
    CHECK(parse_atom(to_atom(h)) == h);
  }
  CHECK(parse_atom("noise(trk9).").kind == HypothesisKind::Noise);
  CHECK_THROWS_AS(parse_atom("enters(middle,trk1,3)."), ParseError);
  CHECK_THROWS_AS(parse_atom("occludes(trk1,trk2,5,6)."), ParseError);
  CHECK_THROWS_AS(parse_atom("flies(trk1)."), ParseError);
  CHECK_THROWS_AS(parse_atom("noise(trk1)"), ParseError);
}

TEST_CASE("atom documents round-trip", "[atoms]") {
  const std::vector<Tracklet> tracks{fixtures::moving(1, 1, 10, {0, 0, 10, 10}, 1),
                                     fixtures::moving(2, 14, 20, {0, 0, 10, 10}, 1),
                                     fixtures::moving(3, 4, 6, {50, 50, 10, 10}, 0)};
  Explanation a{{Hypothesis::missing_det(1, 2, 10, 14), Hypothesis::noise(3, 4, 6), Hypothesis::same_object(1, 2),
                 Hypothesis::present_at_start(1, 1), Hypothesis::present_at_end(2, 20)},
                31.5};
  Explanation b = a;
  b.total_cost = 31.5;
  const std::vector<ComplexEvent> events{{ComplexEventKind::MovingTogether, 1, 4, {3, 30}}};
  const std::string text = write_atoms(std::vector<Explanation>{a, b}, 7, events);
  CHECK(text.rfind("% model 1/7 cost = 31.500000\n", 0) == 0);
  CHECK(count(text, "% model") == 2);
  CHECK(count(text, "moving_together(obj1,obj4,3,30).") == 1);

  std::istringstream in(text);
  AtomDocument doc = parse_atoms(in);
  REQUIRE(doc.models.size() == 2);
  CHECK(doc.total_models == 7);
  CHECK(doc.events == events);
  restore_noise_spans(doc.models[0], tracks);
  CHECK(doc.models[0].chosen == a.chosen);
  CHECK(doc.models[0].total_cost == 31.5);

  std::istringstream broken("% model 1/1 cost = 0.000000\nnoise(trk1).\nwat\n");
  try {
    parse_atoms(broken);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("scene generation is deterministic", "[scene]") {
  const SyntheticScene s = crossing_scene(7, 2, 107, 1);
  const GeneratedSequence a = generate(s), b = generate(s);
  CHECK(write_detection_rows(a.detections) == write_detection_rows(b.detections));
  CHECK(write_detection_rows(a.ground_truth) == write_detection_rows(b.ground_truth));
  CHECK(a.meta.frame_count == 107);
  const GeneratedSequence c = generate(crossing_scene(8, 2, 107, 1));
  CHECK(write_detection_rows(a.detections) != write_detection_rows(c.detections));

  for (const Detection& d : a.ground_truth) {
    REQUIRE(d.id.has_value());
    REQUIRE(d.box.x >= 0);
    REQUIRE(d.box.right() <= s.bounds.width);
  }
  for (const Detection& d : a.detections) REQUIRE_FALSE(d.id.has_value());
  // The crossing hides the farther walker for a while.
  CHECK(a.detections.size() < a.ground_truth.size());
}

TEST_CASE("scripted boxes follow their waypoints", "[scene]") {
  ScriptedObject o;
  o.path = {{1, 100, 100, 20, 40}, {11, 200, 100, 20, 40}, {21, 200, 200, 20, 40}};
  CHECK(scripted_box(o, 1) == Box2D{90, 80, 20, 40});
  CHECK(scripted_box(o, 6) == Box2D{140, 80, 20, 40});
  CHECK(scripted_box(o, 16) == Box2D{190, 130, 20, 40});
  CHECK_FALSE(scripted_box(o, 22).has_value());
  CHECK_FALSE(scripted_box(o, 0).has_value());

  SyntheticScene bad;
  bad.objects = {o};
  bad.objects[0].path[1].frame = 1;
  CHECK_THROWS_AS(generate(bad), PreconditionError);
  CHECK_THROWS_AS(crossing_scene(1, 1, 100, 1), PreconditionError);
}

TEST_CASE("stress scenes carry border traffic and dropouts", "[scene]") {
  const SyntheticScene s = stress_scene(3, 12, 300);
  CHECK(s.objects.size() == 12);
  const GeneratedSequence g = generate(s);
  std::set<int> late;
  for (const Detection& d : g.ground_truth) {
    if (d.frame > 1) late.insert(*d.id);
  }
  int entering = 0;
  for (const ScriptedObject& o : s.objects) entering += o.path.front().frame > 1;
  CHECK(entering >= 3);
  CHECK(g.detections.size() < g.ground_truth.size() + 300);
}

TEST_CASE("pipeline stages run in order and name their failures", "[pipeline]") {
  const GeneratedSequence g = generate(crossing_scene(7, 2, 107, 1));
  const PipelineRun run = run_pipeline(g.detections, g.meta, Config{}, g.ground_truth);
  std::vector<std::string> stages;
  for (const StageTiming& t : run.timings) stages.push_back(t.stage);
  CHECK(stages == std::vector<std::string>{"config", "track", "abduce", "solve", "synth", "eval"});
  REQUIRE(run.selected() != nullptr);
  REQUIRE(run.report.has_value());
  REQUIRE(run.baseline_report.has_value());

  Config bad;
  bad.tracker.gate = 0;
  try {
    run_pipeline(g.detections, g.meta, bad);
    FAIL("no error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
  }

  // Four tracklets that can pair up two ways, with room for one model only.
  Config tiny;
  tiny.enumeration_cap = 1;
  std::vector<Tracklet> ts{fixtures::moving(1, 1, 10, {400, 300, 40, 80}, 0), fixtures::moving(2, 1, 10, {400, 300, 40, 80}, 0),
                           fixtures::moving(3, 14, 30, {400, 300, 40, 80}, 0), fixtures::moving(4, 14, 30, {400, 300, 40, 80}, 0)};
  try {
    run_from_tracklets(ts, fixtures::meta(30), tiny);
    FAIL("no error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "solve");
    CHECK(std::string(e.what()).rfind("solve: ", 0) == 0);
  }
}

TEST_CASE("pipeline artifacts are deterministic", "[pipeline]") {
  const GeneratedSequence g = generate(stress_scene(4, 12, 200));
  const RunArtifacts a = render_artifacts(run_pipeline(g.detections, g.meta, Config{}, g.ground_truth), true);
  const RunArtifacts b = render_artifacts(run_pipeline(g.detections, g.meta, Config{}, g.ground_truth), true);
  CHECK(a.tracklets_csv == b.tracklets_csv);
  CHECK(a.explanation_atoms == b.explanation_atoms);
  CHECK(a.tracks_csv == b.tracks_csv);
  CHECK(a.tracks_provenance == b.tracks_provenance);
  REQUIRE(a.report.has_value());
  CHECK(*a.report == *b.report);
  CHECK(count(a.tracks_provenance, "\n") == count(a.tracks_csv, "\n"));
}

TEST_CASE("abduce consumes what track emits", "[pipeline]") {
  const GeneratedSequence g = generate(crossing_scene(7, 2, 107, 1));
  const PipelineRun full = run_pipeline(g.detections, g.meta, Config{});
  std::istringstream in(write_mot_csv(full.tracklets));
  const PipelineRun staged = run_from_tracklets(tracklets_from_rows(parse_mot_csv(in)), g.meta, Config{});
  REQUIRE(staged.solution.optima.size() == full.solution.optima.size());
  CHECK(staged.selected()->chosen == full.selected()->chosen);
}

TEST_CASE("render overlays", "[render]") {
  const SequenceMeta m = fixtures::meta(10, 640, 480);
  const std::vector<ObjectTrack> one{object(1, 3, {{10, 20, 30, 40}}, {Provenance::Observed})};
  const std::string svg = render_overlay(one, m, 3, 3);
  CHECK(count(svg, "<rect") == 2);  // background plus the box
  CHECK(count(svg, "stroke-dasharray") == 0);
  CHECK(svg.find(object_color(1)) != std::string::npos);
  CHECK(render_overlay(one, m, 3, 3) == svg);

  const std::vector<ObjectTrack> gap{object(2, 1, {{0, 0, 5, 5}, {1, 0, 5, 5}, {2, 0, 5, 5}},
                                            {Provenance::Observed, Provenance::Interpolated, Provenance::Observed})};
  const std::string dashed = render_overlay(gap, m, 2, 2);
  CHECK(count(dashed, "stroke-dasharray") == 1);
  CHECK(count(render_overlay(gap, m, 1, 3), "stroke-dasharray") == 1);

  CHECK_THROWS_AS(render_overlay(one, m, 0, 3), PreconditionError);
  CHECK_THROWS_AS(render_overlay(one, m, 5, 11), PreconditionError);
  CHECK_THROWS_AS(render_overlay(one, m, 5, 4), PreconditionError);
  CHECK(object_color(3) == object_color(15));
  CHECK(object_color(3) != object_color(4));
}
