#pragma once

#include <stdexcept>
#include <string>

namespace textthermo {

/* Argument outside the mathematical domain of an operation. */
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/* Too few samples (or texts, or words) to perform the requested estimate. */
class InsufficientDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/* Data that is formally sufficient but carries no usable signal,
   e.g. a sample set whose values are all identical. */
class DegenerateDataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/* File could not be read, written or parsed. */
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace textthermo
