#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

enum class ErrorCode {
  InvalidArgument = 1,
  Range,
  UnsupportedModel,
  Pole,
  Accuracy,
  Consistency,
  Precondition,
  Degenerate,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Evaluation hit a true divergence of a susceptibility. `resonance_index` is m in ωτ = mπ.
class PoleError : public Error {
 public:
  PoleError(int resonance_index, const std::string& what)
      : Error(ErrorCode::Pole, what), index_(resonance_index) {}
  int resonance_index() const noexcept { return index_; }

 private:
  int index_;
};

/// Quadrature did not reach the requested tolerance; carries what it did reach.
class AccuracyError : public Error {
 public:
  AccuracyError(double achieved, const std::string& what)
      : Error(ErrorCode::Accuracy, what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace casimir
