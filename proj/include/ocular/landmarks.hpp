#pragma once

#include <array>
#include <cmath>
#include <optional>

namespace ocular {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

inline double distance(Point2 a, Point2 b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

// Six periorbital points, stored p1..p6 at indices 0..5: p1 outer canthus,
// p4 inner canthus, p2/p3 upper lid, p5/p6 lower lid.
struct EyeLandmarks {
  std::array<Point2, 6> p{};
  const Point2& operator[](int one_based) const { return p[one_based - 1]; }
  bool operator==(const EyeLandmarks&) const = default;
};

struct IrisLandmarks {
  Point2 center;
  std::array<Point2, 4> ring{};
  bool operator==(const IrisLandmarks&) const = default;
};

// Mean ring-to-center distance.
inline double iris_radius(const IrisLandmarks& iris) noexcept {
  double sum = 0.0;
  for (const Point2& r : iris.ring) sum += distance(r, iris.center);
  return sum / 4.0;
}

enum class EyeSide { Left, Right };

inline const char* to_string(EyeSide side) noexcept { return side == EyeSide::Left ? "left" : "right"; }

}  // namespace ocular
