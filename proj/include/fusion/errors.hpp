#pragma once

#include <stdexcept>
#include <string>

namespace fusion {

// Exit-code family used by the command-line front end.
enum class ErrorCategory { Input, Numerical, Convergence };

class FusionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
  virtual ErrorCategory category() const noexcept { return ErrorCategory::Input; }
};

#define FUSION_DEFINE_ERROR(Type, Category)                                      \
  class Type : public FusionError {                                              \
   public:                                                                       \
    using FusionError::FusionError;                                              \
    const char* name() const noexcept override { return #Type; }                 \
    ErrorCategory category() const noexcept override { return Category; }        \
  };

FUSION_DEFINE_ERROR(DomainError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(ValueError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(DimensionError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(SimplexError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(GridMismatchError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(PositivityError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(IndexError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(SupportError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(NotNormalizedError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(RankError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(UnsupportedAxiomError, ErrorCategory::Input)
FUSION_DEFINE_ERROR(DegenerateError, ErrorCategory::Numerical)
FUSION_DEFINE_ERROR(SingularityError, ErrorCategory::Numerical)
FUSION_DEFINE_ERROR(BoundednessError, ErrorCategory::Numerical)

#undef FUSION_DEFINE_ERROR

}  // namespace fusion
