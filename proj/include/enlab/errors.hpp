#pragma once

#include <stdexcept>
#include <string>

namespace enlab {

enum class ErrorKind {
  NonRefiningFiltration,
  ProbabilityNotOne,
  ZeroProbabilityOutcome,
  InvalidSpace,
  NotAdapted,
  DimensionMismatch,
  NotMartingale,
  NotHonest,
  NotClassH,
  ZtildeOneAfterTau,
  GenerationExhausted,
  DimensionTooLarge,
  InvalidWitness,
  InvalidDrift,
  InvalidModel,
  SchemaError,
};

const char* to_string(ErrorKind kind);

class EnlabError : public std::runtime_error {
 public:
  EnlabError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace enlab
