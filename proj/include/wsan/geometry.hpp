#pragma once

#include <span>
#include <vector>

namespace wsan {

// Tolerance for geometric assertions (meters).
inline constexpr double kGeomEps = 1e-9;

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

// Lexicographic (x, then y). Used for deterministic tie-breaking.
bool lex_less(const Position& a, const Position& b);

bool is_finite(const Position& p);

// Euclidean distance. Throws InvalidArgument on non-finite input.
double distance(const Position& a, const Position& b);

// Moves `from` along the segment toward `target`, stopping exactly
// `stop_dist` away from `target`. A point already at or within `stop_dist`
// stays put. Throws InvalidArgument on negative stop_dist or non-finite
// input.
Position approach(const Position& from, const Position& target, double stop_dist);

// Intersections of two circles of the same `radius` centered at `a` and `b`.
// Returns 0, 1 (tangency within kGeomEps) or 2 points in lexicographic
// order. Throws InvalidArgument when the centers coincide (infinitely many
// solutions) or radius <= 0.
std::vector<Position> circle_intersections(const Position& a, const Position& b,
                                           double radius);

// Candidate nearest to `reference`; exact distance ties resolved
// lexicographically so the result does not depend on input order.
// Throws InvalidArgument on an empty candidate set.
Position closest_point(std::span<const Position> candidates, const Position& reference);

}  // namespace wsan
