#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cone_fixpoint {

enum class ErrorKind {
  kInvalidInput,
  kInvalidSpec,
  kNotAContraction,
  kEstimation,
  kInvalidWitness,
  kUnsupportedInstance,
  kParse,
  kIo,
};

const char* to_string(ErrorKind kind);

/// Base class of every exception thrown by the library. The kind drives the
/// CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Power iteration did not settle within its iteration cap.
class EstimationError : public Error {
 public:
  EstimationError(const std::string& what, double best_estimate)
      : Error(ErrorKind::kEstimation, what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

class InvalidWitnessError : public Error {
 public:
  InvalidWitnessError(const std::string& what, std::size_t index)
      : Error(ErrorKind::kInvalidWitness, what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace cone_fixpoint
