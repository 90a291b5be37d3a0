#include "abtrack/geometry.hpp"

#include <cmath>
#include <string>

#include "abtrack/error.hpp"
#include "abtrack/simd/box_kernels.hpp"

namespace abtrack {

bool Box2D::valid() const noexcept {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) && w > 0.0 &&
         h > 0.0;
}

void require_valid(const Box2D& b) {
  if (!b.valid()) {
    throw PreconditionError("invalid box (" + std::to_string(b.x) + ", " + std::to_string(b.y) +
                            ", " + std::to_string(b.w) + ", " + std::to_string(b.h) + ")");
  }
}

bool FrameBounds::valid() const noexcept {
  return std::isfinite(width) && std::isfinite(height) && width > 0.0 && height > 0.0 &&
         border_margin >= 0.0 && border_margin < 0.5 * std::min(width, height);
}

std::string_view to_string(Rcc8 r) noexcept {
  switch (r) {
    case Rcc8::DC: return "DC";
    case Rcc8::EC: return "EC";
    case Rcc8::PO: return "PO";
    case Rcc8::EQ: return "EQ";
    case Rcc8::TPP: return "TPP";
    case Rcc8::NTPP: return "NTPP";
    case Rcc8::TPPi: return "TPPi";
    case Rcc8::NTPPi: return "NTPPi";
  }
  return "?";
}

std::string_view to_string(Border b) noexcept {
  switch (b) {
    case Border::Left: return "left";
    case Border::Right: return "right";
    case Border::Top: return "top";
    case Border::Bottom: return "bottom";
  }
  return "?";
}

std::optional<Border> border_from_string(std::string_view s) noexcept {
  for (Border b : {Border::Left, Border::Right, Border::Top, Border::Bottom}) {
    if (to_string(b) == s) return b;
  }
  return std::nullopt;
}

Rcc8 converse(Rcc8 r) noexcept {
  switch (r) {
    case Rcc8::TPP: return Rcc8::TPPi;
    case Rcc8::TPPi: return Rcc8::TPP;
    case Rcc8::NTPP: return Rcc8::NTPPi;
    case Rcc8::NTPPi: return Rcc8::NTPP;
    default: return r;
  }
}

namespace {

struct Edges {
  double x1, y1, x2, y2;
};

Edges edges(const Box2D& b) { return {b.x, b.y, b.x + b.w, b.y + b.h}; }

bool near(double a, double b, double eps) { return std::abs(a - b) <= eps; }

// Every edge of `in` lies inside `out` up to eps.
bool contained(const Edges& in, const Edges& out, double eps) {
  return in.x1 >= out.x1 - eps && in.x2 <= out.x2 + eps && in.y1 >= out.y1 - eps &&
         in.y2 <= out.y2 + eps;
}

bool any_edge_shared(const Edges& a, const Edges& b, double eps) {
  return near(a.x1, b.x1, eps) || near(a.x2, b.x2, eps) || near(a.y1, b.y1, eps) ||
         near(a.y2, b.y2, eps);
}

}  // namespace

Rcc8 rcc8_relation(const Box2D& a, const Box2D& b, double eps) {
  require_valid(a);
  require_valid(b);
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw PreconditionError("rcc8 eps must be finite and >= 0");

  const Edges ea = edges(a);
  const Edges eb = edges(b);

  if (near(ea.x1, eb.x1, eps) && near(ea.x2, eb.x2, eps) && near(ea.y1, eb.y1, eps) &&
      near(ea.y2, eb.y2, eps)) {
    return Rcc8::EQ;
  }

  // Signed overlap per axis; negative is a gap.
  const double ox = std::min(ea.x2, eb.x2) - std::max(ea.x1, eb.x1);
  const double oy = std::min(ea.y2, eb.y2) - std::max(ea.y1, eb.y1);
  if (ox < -eps || oy < -eps) return Rcc8::DC;
  if (ox <= eps || oy <= eps) return Rcc8::EC;

  if (contained(ea, eb, eps)) return any_edge_shared(ea, eb, eps) ? Rcc8::TPP : Rcc8::NTPP;
  if (contained(eb, ea, eps)) return any_edge_shared(ea, eb, eps) ? Rcc8::TPPi : Rcc8::NTPPi;
  return Rcc8::PO;
}

std::optional<Border> border_contact(const Box2D& b, const FrameBounds& f) noexcept {
  const double m = f.border_margin;
  if (b.x <= m) return Border::Left;
  if (b.x + b.w >= f.width - m) return Border::Right;
  if (b.y <= m) return Border::Top;
  if (b.y + b.h >= f.height - m) return Border::Bottom;
  return std::nullopt;
}

Box2D interpolate_box(const Box2D& b1, int t1, const Box2D& b2, int t2, int t) {
  if (t1 >= t2) throw PreconditionError("interpolate_box requires t1 < t2");
  if (t < t1 || t > t2) {
    throw PreconditionError("interpolate_box: frame " + std::to_string(t) + " outside [" +
                            std::to_string(t1) + ", " + std::to_string(t2) + "]");
  }
  if (t == t1) return b1;
  if (t == t2) return b2;
  const double a = static_cast<double>(t - t1) / static_cast<double>(t2 - t1);
  const double r = 1.0 - a;
  return {r * b1.x + a * b2.x, r * b1.y + a * b2.y, r * b1.w + a * b2.w, r * b1.h + a * b2.h};
}

double iou(const Box2D& a, const Box2D& b) noexcept {
  return simd::detail::iou_pair(a.x, a.y, a.w, a.h, b.x, b.y, b.w, b.h);
}

double center_distance(const Box2D& a, const Box2D& b) noexcept {
  const double dx = (b.x + 0.5 * b.w) - (a.x + 0.5 * a.w);
  const double dy = (b.y + 0.5 * b.h) - (a.y + 0.5 * a.h);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace abtrack
