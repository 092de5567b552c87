#pragma once

#include <stdexcept>
#include <string>

namespace carpet {

// Base of every domain error. kind() is the stable error name shown by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CARPET_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

CARPET_DEFINE_ERROR(GridError);
CARPET_DEFINE_ERROR(DigitError);
CARPET_DEFINE_ERROR(CapExceeded);
CARPET_DEFINE_ERROR(DomainError);
CARPET_DEFINE_ERROR(RationalRatioError);
CARPET_DEFINE_ERROR(WeightError);
CARPET_DEFINE_ERROR(DepthError);
CARPET_DEFINE_ERROR(DegenerateError);
CARPET_DEFINE_ERROR(ParseError);
CARPET_DEFINE_ERROR(PrincipalAxisError);

#undef CARPET_DEFINE_ERROR

}  // namespace carpet
