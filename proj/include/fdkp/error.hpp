#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fdkp {

enum class ErrorCode {
  InvalidArgument,
  InvalidConfig,
  NonPositiveSymbol,
  NonFiniteSymbol,
  SingularLongWave,
  WrongModelOrder,
  SubcriticalSpeed,
  DomainTooNarrow,
  IncommensurateWavenumber,
  EigensolveFailure,
  UnstableRun,
  NoGrowthWindow,
  Io,
};

std::string_view to_string(ErrorCode code);

// Numerical failures map to CLI exit code 3, everything else to 2.
bool is_numerical(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fdkp
