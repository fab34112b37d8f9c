#include "distillab/classifier.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "distillab/errors.hpp"

namespace distillab {

namespace {

class ConstantClassifier final : public ClassifierImpl {
 public:
  explicit ConstantClassifier(int label) : label_(label) {}

  int label(const Point&) const override { return label_; }

  std::string kind() const override { return "constant"; }

  void describe(JsonWriter& w) const override {
    w.begin_object();
    w.key_value("kind", "constant");
    w.key("parameters").begin_object();
    w.key_value("label", label_);
    w.end_object();
    w.key("memory").begin_array().end_array();
    w.end_object();
  }

 private:
  int label_;
};

class TableClassifier final : public ClassifierImpl {
 public:
  TableClassifier(std::vector<Point> support, std::vector<int> labels, std::string kind)
      : support_(std::move(support)), labels_(std::move(labels)), kind_(std::move(kind)) {
    if (support_.size() != labels_.size()) {
      throw std::invalid_argument("table classifier: support/label size mismatch");
    }
    for (std::size_t i = 0; i < support_.size(); ++i) {
      index_.emplace(support_[i].coords, i);
    }
  }

  int label(const Point& x) const override {
    auto it = index_.find(x.coords);
    if (it == index_.end()) {
      throw OffSupportError("table classifier queried off its support");
    }
    return labels_[it->second];
  }

  std::string kind() const override { return kind_; }

  void describe(JsonWriter& w) const override {
    w.begin_object();
    w.key_value("kind", kind_);
    w.key("parameters").begin_object().end_object();
    w.key("memory").begin_array();
    for (std::size_t i = 0; i < support_.size(); ++i) {
      w.begin_object();
      w.key("coords").begin_array();
      for (double c : support_[i].coords) w.value(c);
      w.end_array();
      w.key_value("label", labels_[i]);
      w.end_object();
    }
    w.end_array();
    w.end_object();
  }

 private:
  std::vector<Point> support_;
  std::vector<int> labels_;
  std::string kind_;
  std::map<std::vector<double>, std::size_t> index_;
};

}  // namespace

Classifier make_constant_classifier(int label) {
  return Classifier(std::make_shared<ConstantClassifier>(label));
}

Classifier make_table_classifier(std::vector<Point> support, std::vector<int> labels,
                                 std::string kind) {
  return Classifier(
      std::make_shared<TableClassifier>(std::move(support), std::move(labels), std::move(kind)));
}

}  // namespace distillab
