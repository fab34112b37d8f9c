#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace distillab {

// A point of the input space. The metric lives in MetricSpace; coordinates
// are dimensionless.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t dimension() const { return coords.size(); }

  bool finite() const {
    for (double c : coords) {
      if (!std::isfinite(c)) return false;
    }
    return true;
  }

  friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  // Lexicographic; usable as an ordered-container key (coords are finite).
  friend bool operator<(const Point& a, const Point& b) { return a.coords < b.coords; }
};

}  // namespace distillab
