#include "abtrack/render.hpp"

#include <array>

#include "abtrack/error.hpp"
#include "text.hpp"

namespace abtrack {

std::string object_color(int id) {
  static constexpr std::array<const char*, 12> palette = {
      "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
      "#f032e6", "#bfef45", "#469990", "#9a6324", "#800000", "#000075"};
  const int n = static_cast<int>(palette.size());
  return palette[static_cast<std::size_t>(((id % n) + n) % n)];
}

std::string render_overlay(std::span<const ObjectTrack> tracks, const SequenceMeta& meta, int first_frame,
                           int last_frame) {
  if (first_frame > last_frame || first_frame < 1 || last_frame > meta.frame_count) {
    throw PreconditionError("frame range [" + std::to_string(first_frame) + ", " +
                            std::to_string(last_frame) + "] outside [1, " + std::to_string(meta.frame_count) + "]");
  }
  const std::string w = text::format_real(meta.bounds.width);
  const std::string h = text::format_real(meta.bounds.height);
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h + "\" viewBox=\"0 0 " + w +
         " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#202020\"/>\n";
  for (int f = first_frame; f <= last_frame; ++f) {
    out += "<g class=\"frame\" data-frame=\"" + std::to_string(f) + "\">\n";
    for (const ObjectTrack& t : tracks) {
      if (!t.covers(f)) continue;
      const Box2D& b = t.at(f);
      const bool interp = t.provenance[static_cast<std::size_t>(f - t.first_frame)] == Provenance::Interpolated;
      out += "<rect x=\"" + text::format_fixed(b.x, 2) + "\" y=\"" + text::format_fixed(b.y, 2) + "\" width=\"" +
             text::format_fixed(b.w, 2) + "\" height=\"" + text::format_fixed(b.h, 2) +
             "\" fill=\"none\" stroke=\"" + object_color(t.id) + "\" stroke-width=\"2\"" +
             (interp ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
      out += "<text x=\"" + text::format_fixed(b.x, 2) + "\" y=\"" + text::format_fixed(b.y - 4.0, 2) +
             "\" fill=\"" + object_color(t.id) + "\" font-size=\"12\">obj" + std::to_string(t.id) + "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace abtrack
