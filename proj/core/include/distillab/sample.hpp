#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "distillab/point.hpp"

namespace distillab {

struct LabeledItem {
  Point point;
  int label = 0;
};

// An ordered sequence of (point, label) pairs. Order matters: nearest
// neighbour ties resolve toward the lowest item index.
struct LabeledSample {
  std::vector<LabeledItem> items;

  LabeledSample() = default;
  explicit LabeledSample(std::vector<LabeledItem> it) : items(std::move(it)) {}

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  auto begin() const { return items.begin(); }
  auto end() const { return items.end(); }
};

}  // namespace distillab
