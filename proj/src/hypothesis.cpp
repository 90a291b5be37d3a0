#include "abtrack/hypothesis.hpp"

#include <vector>

#include "abtrack/error.hpp"
#include "text.hpp"

namespace abtrack {

Hypothesis Hypothesis::enters(Border b, int trk, int t) {
  return {HypothesisKind::Enters, {trk, 0, 0}, b, {t, t}};
}
Hypothesis Hypothesis::exits(Border b, int trk, int t) {
  return {HypothesisKind::Exits, {trk, 0, 0}, b, {t, t}};
}
Hypothesis Hypothesis::occludes(int gone, int back, int occluder, int t1, int t2) {
  return {HypothesisKind::Occludes, {gone, back, occluder}, std::nullopt, {t1, t2}};
}
Hypothesis Hypothesis::missing_det(int gone, int back, int t1, int t2) {
  return {HypothesisKind::MissingDet, {gone, back, 0}, std::nullopt, {t1, t2}};
}
Hypothesis Hypothesis::noise(int trk, int first, int last) {
  return {HypothesisKind::Noise, {trk, 0, 0}, std::nullopt, {first, last}};
}
Hypothesis Hypothesis::same_object(int earlier, int later) {
  return {HypothesisKind::SameObject, {earlier, later, 0}, std::nullopt, {}};
}
Hypothesis Hypothesis::belongs_to(int part, int whole) {
  return {HypothesisKind::BelongsTo, {part, whole, 0}, std::nullopt, {}};
}
Hypothesis Hypothesis::present_at_start(int trk, int t) {
  return {HypothesisKind::PresentAtStart, {trk, 0, 0}, std::nullopt, {t, t}};
}
Hypothesis Hypothesis::present_at_end(int trk, int t) {
  return {HypothesisKind::PresentAtEnd, {trk, 0, 0}, std::nullopt, {t, t}};
}

int Hypothesis::arity() const noexcept {
  switch (kind) {
    case HypothesisKind::Occludes: return 3;
    case HypothesisKind::MissingDet:
    case HypothesisKind::SameObject:
    case HypothesisKind::BelongsTo: return 2;
    default: return 1;
  }
}

int Hypothesis::duration() const noexcept {
  switch (kind) {
    case HypothesisKind::Occludes:
    case HypothesisKind::MissingDet: return span.last - span.first;
    case HypothesisKind::Noise: return span.last - span.first + 1;
    default: return 0;
  }
}

std::string_view predicate_name(HypothesisKind k) noexcept {
  switch (k) {
    case HypothesisKind::Enters: return "enters";
    case HypothesisKind::Exits: return "exits";
    case HypothesisKind::Occludes: return "occludes";
    case HypothesisKind::MissingDet: return "missing_det";
    case HypothesisKind::Noise: return "noise";
    case HypothesisKind::SameObject: return "same_object";
    case HypothesisKind::BelongsTo: return "belongs_to";
    case HypothesisKind::PresentAtStart: return "present_at_start";
    case HypothesisKind::PresentAtEnd: return "present_at_end";
  }
  return "?";
}

namespace {

std::string trk(int id) { return "trk" + std::to_string(id); }

struct Term {
  std::string_view name;
  std::vector<std::string_view> args;
};

// `name(a,b,...).` with optional surrounding whitespace.
Term split_term(std::string_view s) {
  s = text::trim(s);
  if (s.empty() || s.back() != '.') throw ParseError(0, "atom must end with '.'");
  s.remove_suffix(1);
  s = text::trim(s);
  const auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') throw ParseError(0, "malformed atom '" + std::string(s) + "'");
  Term t;
  t.name = text::trim(s.substr(0, open));
  for (std::string_view a : text::split(s.substr(open + 1, s.size() - open - 2), ',')) t.args.push_back(text::trim(a));
  return t;
}

int parse_prefixed(std::string_view arg, std::string_view prefix) {
  if (arg.substr(0, prefix.size()) != prefix) throw ParseError(0, "expected " + std::string(prefix) + "<n>, got '" + std::string(arg) + "'");
  const auto v = text::to_integer(arg.substr(prefix.size()));
  if (!v || *v < 0) throw ParseError(0, "bad identifier '" + std::string(arg) + "'");
  return static_cast<int>(*v);
}

int parse_frame(std::string_view arg) {
  const auto v = text::to_integer(arg);
  if (!v) throw ParseError(0, "bad frame '" + std::string(arg) + "'");
  return static_cast<int>(*v);
}

Border parse_border(std::string_view arg) {
  const auto b = border_from_string(arg);
  if (!b) throw ParseError(0, "bad border '" + std::string(arg) + "'");
  return *b;
}

}  // namespace

std::string to_atom(const Hypothesis& h) {
  std::string out(predicate_name(h.kind));
  out += '(';
  switch (h.kind) {
    case HypothesisKind::Enters:
    case HypothesisKind::Exits:
      out += std::string(to_string(h.border.value_or(Border::Left))) + "," + trk(h.tracks[0]) + "," +
             std::to_string(h.span.first);
      break;
    case HypothesisKind::Occludes:
      out += trk(h.tracks[0]) + "," + trk(h.tracks[1]) + "," + trk(h.tracks[2]) + "," +
             std::to_string(h.span.first) + "," + std::to_string(h.span.last);
      break;
    case HypothesisKind::MissingDet:
      out += trk(h.tracks[0]) + "," + trk(h.tracks[1]) + "," + std::to_string(h.span.first) + "," +
             std::to_string(h.span.last);
      break;
    case HypothesisKind::Noise:
      out += trk(h.tracks[0]);
      break;
    case HypothesisKind::SameObject:
    case HypothesisKind::BelongsTo:
      out += trk(h.tracks[0]) + "," + trk(h.tracks[1]);
      break;
    case HypothesisKind::PresentAtStart:
    case HypothesisKind::PresentAtEnd:
      out += trk(h.tracks[0]) + "," + std::to_string(h.span.first);
      break;
  }
  out += ").";
  return out;
}

Hypothesis parse_atom(std::string_view text_in) {
  const Term t = split_term(text_in);
  const auto want = [&](std::size_t n) {
    if (t.args.size() != n) {
      throw ParseError(0, std::string(t.name) + " takes " + std::to_string(n) + " arguments");
    }
  };
  if (t.name == "enters" || t.name == "exits") {
    want(3);
    const Border b = parse_border(t.args[0]);
    const int id = parse_prefixed(t.args[1], "trk");
    const int f = parse_frame(t.args[2]);
    return t.name == "enters" ? Hypothesis::enters(b, id, f) : Hypothesis::exits(b, id, f);
  }
  if (t.name == "occludes") {
    want(5);
    return Hypothesis::occludes(parse_prefixed(t.args[0], "trk"), parse_prefixed(t.args[1], "trk"),
                                parse_prefixed(t.args[2], "trk"), parse_frame(t.args[3]), parse_frame(t.args[4]));
  }
  if (t.name == "missing_det") {
    want(4);
    return Hypothesis::missing_det(parse_prefixed(t.args[0], "trk"), parse_prefixed(t.args[1], "trk"),
                                   parse_frame(t.args[2]), parse_frame(t.args[3]));
  }
  if (t.name == "noise") {
    // The atom carries no span; restore_noise_spans fills it from the tracklets.
    want(1);
    return Hypothesis::noise(parse_prefixed(t.args[0], "trk"), 0, 0);
  }
  if (t.name == "same_object" || t.name == "belongs_to") {
    want(2);
    const int a = parse_prefixed(t.args[0], "trk");
    const int b = parse_prefixed(t.args[1], "trk");
    return t.name == "same_object" ? Hypothesis::same_object(a, b) : Hypothesis::belongs_to(a, b);
  }
  if (t.name == "present_at_start" || t.name == "present_at_end") {
    want(2);
    const int id = parse_prefixed(t.args[0], "trk");
    const int f = parse_frame(t.args[1]);
    return t.name == "present_at_start" ? Hypothesis::present_at_start(id, f) : Hypothesis::present_at_end(id, f);
  }
  throw ParseError(0, "unknown predicate '" + std::string(t.name) + "'");
}

}  // namespace abtrack
