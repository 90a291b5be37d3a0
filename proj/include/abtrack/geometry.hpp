#pragma once

#include <optional>
#include <string_view>

namespace abtrack {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

/// Axis-aligned rectangle in pixel coordinates; (x, y) is the top-left corner.
struct Box2D {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const noexcept { return x + w; }
  double bottom() const noexcept { return y + h; }
  double area() const noexcept { return w * h; }
  Point2D center() const noexcept { return {x + 0.5 * w, y + 0.5 * h}; }

  /// Finite fields and strictly positive extent.
  bool valid() const noexcept;

  friend bool operator==(const Box2D&, const Box2D&) = default;
};

/// Throws PreconditionError unless `b.valid()`.
void require_valid(const Box2D& b);

struct FrameBounds {
  double width = 0.0;
  double height = 0.0;
  double border_margin = 20.0;

  bool valid() const noexcept;
};

enum class Rcc8 { DC, EC, PO, EQ, TPP, NTPP, TPPi, NTPPi };

enum class Border { Left, Right, Top, Bottom };

std::string_view to_string(Rcc8 r) noexcept;
std::string_view to_string(Border b) noexcept;  // lowercase: "left", ...
std::optional<Border> border_from_string(std::string_view s) noexcept;

/// The relation converse: TPP <-> TPPi, NTPP <-> NTPPi, the rest map to themselves.
Rcc8 converse(Rcc8 r) noexcept;

/// True for relations whose regions share interior points (everything but DC and EC).
constexpr bool interiors_overlap(Rcc8 r) noexcept { return r != Rcc8::DC && r != Rcc8::EC; }

inline constexpr double kDefaultCoincidenceEps = 0.5;

/// RCC8 relation of `a` with respect to `b` for closed rectangles. Edges closer
/// than `eps` pixels are treated as coincident. Throws PreconditionError on a
/// degenerate box or negative eps.
Rcc8 rcc8_relation(const Box2D& a, const Box2D& b, double eps = kDefaultCoincidenceEps);

/// Border whose margin strip the box reaches, tie-broken Left, Right, Top, Bottom.
std::optional<Border> border_contact(const Box2D& b, const FrameBounds& f) noexcept;

/// Linear interpolation of all four box fields between (b1, t1) and (b2, t2).
/// Exact at both endpoints. Throws PreconditionError unless t1 < t2 and t in [t1, t2].
Box2D interpolate_box(const Box2D& b1, int t1, const Box2D& b2, int t2, int t);

/// Intersection over union in [0, 1].
double iou(const Box2D& a, const Box2D& b) noexcept;

double center_distance(const Box2D& a, const Box2D& b) noexcept;

}  // namespace abtrack
