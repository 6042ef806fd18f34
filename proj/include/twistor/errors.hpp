#pragma once

#include <stdexcept>
#include <string>

namespace twistor {

// Bad arguments to an operation (index out of range, non-unit vectors, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A function was evaluated outside its domain (log of a negative, ...).
class EvaluationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A chart point lies outside the admissible region of a chart.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A metric failed positive definiteness.
class ValidityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical procedure could not reach a clean verdict (no spectral gap, ...).
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComparisonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geodesic or parallel-transport integration produced non-finite values.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration (unknown key, out-of-range knob, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace twistor
