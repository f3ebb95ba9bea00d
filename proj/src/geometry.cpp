#include "wsan/geometry.hpp"

#include <cmath>

#include "wsan/error.hpp"

namespace wsan {

namespace {

void require_finite(const Position& p, const char* role) {
  if (!is_finite(p)) {
    throw InvalidArgument(std::string("non-finite coordinates for ") + role);
  }
}

}  // namespace

bool lex_less(const Position& a, const Position& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

bool is_finite(const Position& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

double distance(const Position& a, const Position& b) {
  require_finite(a, "distance endpoint");
  require_finite(b, "distance endpoint");
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

Position approach(const Position& from, const Position& target, double stop_dist) {
  require_finite(from, "approach start");
  require_finite(target, "approach target");
  if (!(stop_dist >= 0.0)) {
    throw InvalidArgument("approach: stop distance must be non-negative");
  }
  const double d = distance(from, target);
  if (d <= stop_dist) {
    return from;
  }
  // d > stop_dist >= 0, so the direction is well defined.
  const double scale = stop_dist / d;
  return Position{target.x + (from.x - target.x) * scale,
                  target.y + (from.y - target.y) * scale};
}

std::vector<Position> circle_intersections(const Position& a, const Position& b,
                                           double radius) {
  require_finite(a, "circle center");
  require_finite(b, "circle center");
  if (!(radius > 0.0)) {
    throw InvalidArgument("circle_intersections: radius must be positive");
  }
  if (a == b) {
    throw InvalidArgument("circle_intersections: coincident centers");
  }
  const double d = distance(a, b);
  const Position mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
  if (std::abs(d - 2.0 * radius) <= kGeomEps) {
    return {mid};
  }
  if (d > 2.0 * radius) {
    return {};
  }
  const double half = d / 2.0;
  const double h = std::sqrt(radius * radius - half * half);
  // Unit normal to the center line.
  const double nx = -(b.y - a.y) / d;
  const double ny = (b.x - a.x) / d;
  Position p1{mid.x + h * nx, mid.y + h * ny};
  Position p2{mid.x - h * nx, mid.y - h * ny};
  if (lex_less(p2, p1)) std::swap(p1, p2);
  return {p1, p2};
}

Position closest_point(std::span<const Position> candidates, const Position& reference) {
  if (candidates.empty()) {
    throw InvalidArgument("closest_point: empty candidate set");
  }
  require_finite(reference, "closest_point reference");
  const Position* best = nullptr;
  double best_dist = 0.0;
  for (const Position& c : candidates) {
    const double d = distance(c, reference);
    if (best == nullptr || d < best_dist || (d == best_dist && lex_less(c, *best))) {
      best = &c;
      best_dist = d;
    }
  }
  return *best;
}

}  // namespace wsan
