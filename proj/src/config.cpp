#include "abtrack/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>
#include <type_traits>

#include "abtrack/error.hpp"
#include "text.hpp"

namespace abtrack {

bool CostWeights::valid() const noexcept {
  for (double v : {enter, exit, occlusion, missing_det, noise, occlusion_len, missing_det_len,
                   noise_len, motion}) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return true;
}

CostWeights CostWeights::scaled(double f) const noexcept {
  CostWeights s = *this;
  for (double* v : {&s.enter, &s.exit, &s.occlusion, &s.missing_det, &s.noise, &s.occlusion_len,
                    &s.missing_det_len, &s.noise_len, &s.motion}) {
    *v *= f;
  }
  return s;
}

void Config::validate() const {
  const auto fail = [](const std::string& what) { throw PreconditionError("config: " + what); };
  if (!weights.valid()) fail("cost weights must be finite and >= 0");
  if (!(tracker.gate > 0.0)) fail("gate must be > 0");
  if (!(tracker.center_gate > 0.0)) fail("center_gate must be > 0");
  if (tracker.max_age < 1) fail("max_age must be >= 1");
  if (tracker.min_hits < 1) fail("min_hits must be >= 1");
  if (tracker.process_noise_pos < 0.0 || tracker.process_noise_vel < 0.0) fail("process noise must be >= 0");
  if (tracker.measurement_noise < 0.0) fail("measurement_noise must be >= 0");
  if (!(tracker.init_velocity_var > 0.0)) fail("init_velocity_var must be > 0");
  if (!(eps >= 0.0)) fail("eps must be >= 0");
  if (!(border_margin >= 0.0)) fail("border_margin must be >= 0");
  if (max_gap < 1) fail("max_gap must be >= 1");
  if (enumeration_cap < 1) fail("enumeration_cap must be >= 1");
  if (!(containment_ratio > 0.0 && containment_ratio <= 1.0)) fail("containment_ratio must be in (0, 1]");
  if (mt_min_frames < 2) fail("mt_min_frames must be >= 2");
  if (!(mt_vel_tol >= 0.0)) fail("mt_vel_tol must be >= 0");
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) fail("iou_threshold must be in (0, 1)");
}

namespace {

struct Field {
  std::string_view key;
  std::function<std::string(const Config&)> get;
  std::function<bool(Config&, std::string_view)> set;
};

Field real_field(std::string_view key, double Config::*member) {
  return {key, [member](const Config& c) { return text::format_real(c.*member); },
          [member](Config& c, std::string_view v) {
            const auto d = text::to_double(v);
            if (!d) return false;
            c.*member = *d;
            return true;
          }};
}

template <typename Sub>
Field real_field(std::string_view key, Sub Config::*sub, double Sub::*member) {
  return {key, [sub, member](const Config& c) { return text::format_real(c.*sub.*member); },
          [sub, member](Config& c, std::string_view v) {
            const auto d = text::to_double(v);
            if (!d) return false;
            c.*sub.*member = *d;
            return true;
          }};
}

template <typename Int, typename Owner, typename Target>
Field int_field(std::string_view key, Owner owner_of, Int Target::*member) {
  return {key, [owner_of, member](const Config& c) { return std::to_string(owner_of(c).*member); },
          [owner_of, member](Config& c, std::string_view v) {
            const auto i = text::to_integer(v);
            if (!i || (std::is_unsigned_v<Int> && *i < 0)) return false;
            owner_of(c).*member = static_cast<Int>(*i);
            return true;
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    const auto self = [](auto& c) -> auto& { return c; };
    const auto trk = [](auto& c) -> auto& { return c.tracker; };
    std::vector<Field> f;
    f.push_back(real_field("w_enter", &Config::weights, &CostWeights::enter));
    f.push_back(real_field("w_exit", &Config::weights, &CostWeights::exit));
    f.push_back(real_field("w_occl", &Config::weights, &CostWeights::occlusion));
    f.push_back(real_field("w_md", &Config::weights, &CostWeights::missing_det));
    f.push_back(real_field("w_noise", &Config::weights, &CostWeights::noise));
    f.push_back(real_field("w_occl_len", &Config::weights, &CostWeights::occlusion_len));
    f.push_back(real_field("w_md_len", &Config::weights, &CostWeights::missing_det_len));
    f.push_back(real_field("w_noise_len", &Config::weights, &CostWeights::noise_len));
    f.push_back(real_field("w_v", &Config::weights, &CostWeights::motion));
    f.push_back({"distance",
                 [](const Config& c) {
                   return std::string(c.tracker.distance == AssociationDistance::Iou ? "iou" : "center");
                 },
                 [](Config& c, std::string_view v) {
                   if (v == "iou") c.tracker.distance = AssociationDistance::Iou;
                   else if (v == "center") c.tracker.distance = AssociationDistance::Center;
                   else return false;
                   return true;
                 }});
    f.push_back(real_field("gate", &Config::tracker, &TrackerParams::gate));
    f.push_back(real_field("center_gate", &Config::tracker, &TrackerParams::center_gate));
    f.push_back(int_field("max_age", trk, &TrackerParams::max_age));
    f.push_back(int_field("min_hits", trk, &TrackerParams::min_hits));
    f.push_back(real_field("min_confidence", &Config::tracker, &TrackerParams::min_confidence));
    f.push_back(real_field("process_noise_pos", &Config::tracker, &TrackerParams::process_noise_pos));
    f.push_back(real_field("process_noise_vel", &Config::tracker, &TrackerParams::process_noise_vel));
    f.push_back(real_field("measurement_noise", &Config::tracker, &TrackerParams::measurement_noise));
    f.push_back(real_field("init_velocity_var", &Config::tracker, &TrackerParams::init_velocity_var));
    f.push_back(real_field("eps", &Config::eps));
    f.push_back(real_field("border_margin", &Config::border_margin));
    f.push_back(int_field("max_gap", self, &Config::max_gap));
    f.push_back(int_field("enumeration_cap", self, &Config::enumeration_cap));
    f.push_back(real_field("containment_ratio", &Config::containment_ratio));
    f.push_back(int_field("mt_min_frames", self, &Config::mt_min_frames));
    f.push_back(real_field("mt_vel_tol", &Config::mt_vel_tol));
    f.push_back(real_field("iou_threshold", &Config::iou_threshold));
    return f;
  }();
  return table;
}

}  // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  for (const auto& kv : text::read_key_values(in)) {
    const Field* field = nullptr;
    for (const Field& f : fields()) {
      if (f.key == kv.key) field = &f;
    }
    if (field == nullptr) throw ParseError(kv.line, "unknown config key '" + kv.key + "'");
    if (!field->set(cfg, kv.value)) {
      throw ParseError(kv.line, "bad value '" + kv.value + "' for '" + kv.key + "'");
    }
  }
  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    throw ParseError(0, e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const Config& cfg) {
  std::ostringstream out;
  for (const Field& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
  return out.str();
}

}  // namespace abtrack
