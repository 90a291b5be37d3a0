#include "abtrack/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "abtrack/error.hpp"
#include "text.hpp"

namespace abtrack {

namespace {

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  }) && !text::to_double(s);
}

Detection parse_row(std::string_view line, std::size_t number) {
  const auto fields = text::split(line, ',');
  if (fields.size() != 10 && fields.size() != 11) {
    throw ParseError(number, "expected 10 or 11 comma-separated fields, got " + std::to_string(fields.size()));
  }
  static constexpr const char* kNames[] = {"frame", "id", "bb_left", "bb_top", "bb_width",
                                           "bb_height", "conf", "x", "y", "z"};
  double values[10];
  for (std::size_t i = 0; i < 10; ++i) {
    const auto v = text::to_double(fields[i]);
    if (!v) throw ParseError(number, std::string("non-numeric ") + kNames[i] + " '" + std::string(text::trim(fields[i])) + "'");
    values[i] = *v;
  }
  const auto frame = text::to_integer(fields[0]);
  if (!frame) throw ParseError(number, "frame must be an integer");
  if (*frame < 1) throw ParseError(number, "frame must be >= 1");
  const auto id = text::to_integer(fields[1]);
  if (!id) throw ParseError(number, "id must be an integer");
  if (*id < -1) throw ParseError(number, "id must be -1 or >= 0");

  Detection d;
  d.frame = static_cast<int>(*frame);
  if (*id >= 0) d.id = static_cast<int>(*id);
  d.box = {values[2], values[3], values[4], values[5]};
  if (!(d.box.w > 0.0)) throw ParseError(number, "bb_width must be > 0");
  if (!(d.box.h > 0.0)) throw ParseError(number, "bb_height must be > 0");
  d.confidence = values[6];
  if (fields.size() == 11) {
    const std::string_view cls = text::trim(fields[10]);
    if (!is_token(cls)) throw ParseError(number, "class label must be a token, got '" + std::string(cls) + "'");
    d.class_label = std::string(cls);
  }
  return d;
}

}  // namespace

std::vector<Detection> parse_mot_csv(std::istream& in) {
  std::vector<Detection> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = text::trim(line);
    if (body.empty()) continue;
    out.push_back(parse_row(body, number));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
  return out;
}

std::vector<Detection> load_mot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_mot_csv(in);
}

std::string write_mot_csv(std::span<const Tracklet> tracks) {
  struct Row {
    int frame;
    int id;
    const Box2D* box;
    const std::string* cls;
  };
  std::vector<Row> rows;
  for (const Tracklet& t : tracks) {
    if (t.id < 0) throw PreconditionError("write_mot_csv: tracklet without an assigned id");
    for (int f = t.first_frame; f <= t.last_frame(); ++f) rows.push_back({f, t.id, &t.at(f), &t.class_label});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::string out;
  for (const Row& r : rows) {
    out += std::to_string(r.frame);
    out += ',';
    out += std::to_string(r.id);
    for (double v : {r.box->x, r.box->y, r.box->w, r.box->h}) {
      out += ',';
      out += text::format_fixed(v, 2);
    }
    out += ",1,-1,-1,-1";
    if (*r.cls != kDefaultClass) {
      out += ',';
      out += *r.cls;
    }
    out += '\n';
  }
  return out;
}

std::string write_detection_rows(std::span<const Detection> rows) {
  std::string out;
  for (const Detection& d : rows) {
    out += std::to_string(d.frame);
    out += ',';
    out += d.id ? std::to_string(*d.id) : std::string("-1");
    for (double v : {d.box.x, d.box.y, d.box.w, d.box.h}) {
      out += ',';
      out += text::format_fixed(v, 2);
    }
    out += ',';
    out += text::format_fixed(d.confidence, 2);
    out += ",-1,-1,-1";
    if (d.class_label != kDefaultClass) {
      out += ',';
      out += d.class_label;
    }
    out += '\n';
  }
  return out;
}

std::vector<Tracklet> tracklets_from_rows(std::span<const Detection> rows) {
  std::map<int, std::vector<const Detection*>> by_id;
  for (const Detection& d : rows) {
    if (!d.id) throw ParseError(0, "row at frame " + std::to_string(d.frame) + " has no track id");
    by_id[*d.id].push_back(&d);
  }
  std::vector<Tracklet> out;
  for (auto& [id, ds] : by_id) {
    std::stable_sort(ds.begin(), ds.end(), [](const Detection* a, const Detection* b) { return a->frame < b->frame; });
    Tracklet t;
    t.id = id;
    t.class_label = ds.front()->class_label;
    t.first_frame = ds.front()->frame;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const int expected = t.first_frame + static_cast<int>(i);
      if (ds[i]->frame != expected) {
        throw ParseError(0, "track " + std::to_string(id) + ": " +
                                (ds[i]->frame < expected ? "duplicate frame " : "missing frame ") +
                                std::to_string(expected));
      }
      t.boxes.push_back(ds[i]->box);
    }
    out.push_back(std::move(t));
  }
  return out;
}

SequenceMeta parse_meta(std::istream& in, double border_margin) {
  SequenceMeta meta;
  bool have_width = false, have_height = false, have_frames = false;
  for (const auto& kv : text::read_key_values(in)) {
    if (kv.key == "name") {
      meta.name = kv.value;
    } else if (kv.key == "frame_count") {
      const auto v = text::to_integer(kv.value);
      if (!v || *v < 1) throw ParseError(kv.line, "frame_count must be an integer >= 1");
      meta.frame_count = static_cast<int>(*v);
      have_frames = true;
    } else if (kv.key == "width" || kv.key == "height" || kv.key == "frame_rate") {
      const auto v = text::to_double(kv.value);
      if (!v || !(*v > 0.0)) throw ParseError(kv.line, kv.key + " must be a positive number");
      if (kv.key == "width") {
        meta.bounds.width = *v;
        have_width = true;
      } else if (kv.key == "height") {
        meta.bounds.height = *v;
        have_height = true;
      } else {
        meta.frame_rate = *v;
      }
    } else {
      throw ParseError(kv.line, "unknown meta key '" + kv.key + "'");
    }
  }
  if (!have_width || !have_height || !have_frames) {
    throw ParseError(0, "meta requires frame_count, width and height");
  }
  meta.bounds.border_margin = border_margin;
  if (!meta.bounds.valid()) throw ParseError(0, "border_margin must be below half the smaller frame side");
  return meta;
}

SequenceMeta load_meta(const std::string& path, double border_margin) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_meta(in, border_margin);
}

std::string write_meta(const SequenceMeta& meta) {
  std::ostringstream out;
  out << "name = " << meta.name << '\n'
      << "frame_count = " << meta.frame_count << '\n'
      << "width = " << text::format_real(meta.bounds.width) << '\n'
      << "height = " << text::format_real(meta.bounds.height) << '\n'
      << "frame_rate = " << text::format_real(meta.frame_rate) << '\n';
  return out.str();
}

}  // namespace abtrack
