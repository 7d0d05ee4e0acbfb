#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlp {

enum class Errc {
  InvalidGrid,
  NonFiniteSample,
  GridMismatch,
  InvalidExponent,
  MissingPInf,
  BracketFailure,
  ExponentMismatch,
  BetaOutOfRange,
  AxisOutOfRange,
  AlphaOutOfRange,
  SymmetryViolation,
  DegenerateSweep,
  LatticeMismatch,
  Diverged,
  WrongMode,
  WrongForceForm,
  NoAdmissibleT,
  InvalidSpec,
  Parse,
  Usage,
  IO,
};

std::string_view to_string(Errc code) noexcept;

/// Every library failure surfaces as this exception; code() identifies the
/// condition so callers (the CLI in particular) can map it without parsing
/// the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vlp
