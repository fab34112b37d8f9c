#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "distillab/point.hpp"

namespace distillab {

enum class MetricKind {
  Euclidean,
  HammingBinary,  // coordinates restricted to {0,1}
};

struct MetricSpace {
  MetricKind kind = MetricKind::Euclidean;
  int dimension = 1;

  static MetricSpace euclidean(int dim) { return MetricSpace{MetricKind::Euclidean, dim}; }
  static MetricSpace hamming(int dim) { return MetricSpace{MetricKind::HammingBinary, dim}; }

  double distance(const Point& a, const Point& b) const {
    const std::size_t n = a.coords.size();
    if (n != b.coords.size()) {
      throw std::invalid_argument("metric: dimension mismatch between points");
    }
    if (kind == MetricKind::Euclidean) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = a.coords[i] - b.coords[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coords[i] != b.coords[i]) h += 1.0;
    }
    return h;
  }

  std::string kind_name() const {
    return kind == MetricKind::Euclidean ? "euclidean" : "hamming-on-binary-cube";
  }

  static MetricSpace from_kind_name(const std::string& name, int dim) {
    if (name == "euclidean") return euclidean(dim);
    if (name == "hamming-on-binary-cube") return hamming(dim);
    throw std::invalid_argument("unknown metric kind: " + name);
  }
};

}  // namespace distillab
