#include "abtrack/atoms.hpp"

#include <algorithm>
#include <sstream>

#include "abtrack/error.hpp"
#include "text.hpp"

namespace abtrack {

std::string write_atoms(std::span<const Explanation> models, std::size_t total_models,
                        std::span<const ComplexEvent> events) {
  std::string out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    out += "% model " + std::to_string(i + 1) + "/" + std::to_string(total_models) +
           " cost = " + text::format_fixed(models[i].total_cost, 6) + "\n";
    for (const Hypothesis& h : models[i].chosen) out += to_atom(h) + "\n";
    if (i == 0) {
      for (const ComplexEvent& e : events) out += to_atom(e) + "\n";
    }
  }
  return out;
}

ComplexEvent parse_complex_event_atom(std::string_view s) {
  s = text::trim(s);
  ComplexEvent e;
  std::string_view rest;
  if (s.starts_with("passing_behind(")) {
    e.kind = ComplexEventKind::PassingBehind;
    rest = s.substr(15);
  } else if (s.starts_with("moving_together(")) {
    e.kind = ComplexEventKind::MovingTogether;
    rest = s.substr(16);
  } else {
    throw ParseError(0, "not a complex event atom");
  }
  if (!rest.ends_with(").")) throw ParseError(0, "complex event atom must end with ').'");
  const auto args = text::split(rest.substr(0, rest.size() - 2), ',');
  if (args.size() != 4) throw ParseError(0, "complex event atoms take 4 arguments");
  const auto object = [](std::string_view a) {
    a = text::trim(a);
    const auto v = a.starts_with("obj") ? text::to_integer(a.substr(3)) : std::nullopt;
    if (!v) throw ParseError(0, "bad object '" + std::string(a) + "'");
    return static_cast<int>(*v);
  };
  const auto frame = [](std::string_view a) {
    const auto v = text::to_integer(a);
    if (!v) throw ParseError(0, "bad frame '" + std::string(a) + "'");
    return static_cast<int>(*v);
  };
  e.first_object = object(args[0]);
  e.second_object = object(args[1]);
  e.span = {frame(args[2]), frame(args[3])};
  return e;
}

AtomDocument parse_atoms(std::istream& in) {
  AtomDocument doc;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = text::trim(line);
    if (body.empty()) continue;
    try {
      if (body.starts_with("% model ")) {
        // "% model i/N cost = C"
        const auto fields = text::split(body.substr(8), ' ');
        const auto slash = fields.empty() ? std::string_view::npos : fields[0].find('/');
        if (slash == std::string_view::npos) throw ParseError(0, "malformed model header");
        const auto total = text::to_integer(fields[0].substr(slash + 1));
        if (!total || *total < 0) throw ParseError(0, "malformed model count");
        doc.total_models = static_cast<std::size_t>(*total);
        Explanation e;
        if (fields.size() == 4 && fields[1] == "cost" && fields[2] == "=") {
          const auto c = text::to_double(fields[3]);
          if (!c) throw ParseError(0, "malformed cost");
          e.total_cost = *c;
        }
        doc.models.push_back(std::move(e));
        continue;
      }
      if (body.front() == '%') continue;
      if (doc.models.empty()) throw ParseError(0, "atom before the first model header");
      if (body.starts_with("passing_behind(") || body.starts_with("moving_together(")) {
        doc.events.push_back(parse_complex_event_atom(body));
      } else {
        doc.models.back().chosen.push_back(parse_atom(body));
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(number, e.what());
    }
  }
  return doc;
}

void restore_noise_spans(Explanation& expl, std::span<const Tracklet> tracks) {
  for (Hypothesis& h : expl.chosen) {
    if (h.kind != HypothesisKind::Noise) continue;
    for (const Tracklet& t : tracks) {
      if (t.id == h.tracks[0]) h.span = {t.first_frame, t.last_frame()};
    }
  }
  std::sort(expl.chosen.begin(), expl.chosen.end());
}

}  // namespace abtrack
