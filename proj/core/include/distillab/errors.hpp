#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distillab {

// Thrown when a classifier is queried at a point outside the support it was
// defined on. Off-support queries are never answered with a default label;
// a silent default would corrupt total-variation estimates downstream.
class OffSupportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wraps a failure inside one Monte-Carlo trial. The trial index is the
// smallest failing index, so aborts are deterministic under parallel runs.
class TrainingError : public std::runtime_error {
 public:
  TrainingError(std::size_t trial_index, const std::string& what)
      : std::runtime_error("trial " + std::to_string(trial_index) + ": " + what),
        trial_index_(trial_index) {}

  std::size_t trial_index() const { return trial_index_; }

 private:
  std::size_t trial_index_;
};

// Invalid experiment configuration (unknown name, bad counts, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failure while reading configs or writing results.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace distillab
