#pragma once

#include <stdexcept>
#include <string>

namespace cgclust {

// Unreadable/unwritable files and malformed input files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A score that has no value for the given input, e.g. CVR of a partition
// with a single nonempty cluster (0/0).
class UndefinedScoreError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace cgclust
