#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "distillab/json_writer.hpp"
#include "distillab/point.hpp"
#include "distillab/sample.hpp"

namespace distillab {

// Backend of a Classifier. Implementations must be deterministic: repeated
// queries on the same point return the same label.
class ClassifierImpl {
 public:
  virtual ~ClassifierImpl() = default;

  virtual int label(const Point& x) const = 0;

  // Optional per-label real scores (hinge-ERM and the 1D spline expose them).
  virtual std::optional<std::vector<double>> scores(const Point&) const { return std::nullopt; }

  virtual std::string kind() const = 0;

  // Emits {"kind": ..., "parameters": {...}, "memory": [...]}.
  virtual void describe(JsonWriter& w) const = 0;
};

// Value-semantics handle to an immutable classifier; cheap to copy and safe
// to share across threads.
class Classifier {
 public:
  Classifier() = default;
  explicit Classifier(std::shared_ptr<const ClassifierImpl> impl) : impl_(std::move(impl)) {}

  bool valid() const { return impl_ != nullptr; }

  int operator()(const Point& x) const { return impl_->label(x); }

  std::optional<std::vector<double>> scores(const Point& x) const { return impl_->scores(x); }

  std::string kind() const { return impl_->kind(); }

  std::string describe_json() const {
    JsonWriter w;
    impl_->describe(w);
    return w.take();
  }

 private:
  std::shared_ptr<const ClassifierImpl> impl_;
};

// A training procedure: sample in, classifier out. Pure function of the
// sample and its captured parameters.
using Trainer = std::function<Classifier(const LabeledSample&)>;

// Enumerable finite hypothesis collection. vc_dim, when set, is an upper
// bound (log2 of the member count for finite classes).
struct HypothesisFamily {
  std::vector<Classifier> members;
  std::optional<std::size_t> vc_dim;
};

Classifier make_constant_classifier(int label);

// Classifier defined by a label table over a fixed finite support; queries
// off the support raise OffSupportError.
Classifier make_table_classifier(std::vector<Point> support, std::vector<int> labels,
                                 std::string kind = "table");

}  // namespace distillab
