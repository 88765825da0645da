// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace geored {

// Base of every error raised by the library. The kind string is stable and is
// what reports and tests key on.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::size_t index)
      : Error("EvaluationError", what + " (index " + std::to_string(index) + ")"),
        index_(index) {}
  explicit EvaluationError(const std::string& what)
      : Error("EvaluationError", what), index_(static_cast<std::size_t>(-1)) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

class StepLimitExceeded : public Error {
 public:
  explicit StepLimitExceeded(const std::string& what) : Error("StepLimitExceeded", what) {}
};

class BlowUp : public Error {
 public:
  BlowUp(const std::string& what, double last_good_time)
      : Error("BlowUp", what + " (last good t = " + std::to_string(last_good_time) + ")"),
        last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

class OffSurface : public Error {
 public:
  OffSurface(const std::string& what, std::size_t constraint)
      : Error("OffSurface", what + " (constraint " + std::to_string(constraint) + ")"),
        constraint_(constraint) {}
  std::size_t constraint() const noexcept { return constraint_; }

 private:
  std::size_t constraint_;
};

// Thin kind-only errors.
#define GEORED_SIMPLE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

GEORED_SIMPLE_ERROR(PairNotEquivalent);
GEORED_SIMPLE_ERROR(PreflightFailed);
GEORED_SIMPLE_ERROR(SingularTime);
GEORED_SIMPLE_ERROR(DegenerateSpectrum);
GEORED_SIMPLE_ERROR(OriginExcluded);
GEORED_SIMPLE_ERROR(UnitarityLost);
GEORED_SIMPLE_ERROR(SingularBlock);
GEORED_SIMPLE_ERROR(DegenerateLagrangian);
GEORED_SIMPLE_ERROR(ConnectionInvalid);
GEORED_SIMPLE_ERROR(NotTimelike);
GEORED_SIMPLE_ERROR(ZeroTimeVelocity);
GEORED_SIMPLE_ERROR(SingularConstraintMatrix);
GEORED_SIMPLE_ERROR(ConstraintDrift);
GEORED_SIMPLE_ERROR(NotNormalized);
GEORED_SIMPLE_ERROR(UnknownScenario);
GEORED_SIMPLE_ERROR(ConfigError);

#undef GEORED_SIMPLE_ERROR

}  // namespace geored
