#include "vlp/error.hpp"

namespace vlp {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidGrid: return "InvalidGrid";
    case Errc::NonFiniteSample: return "NonFiniteSample";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::MissingPInf: return "MissingPInf";
    case Errc::BracketFailure: return "BracketFailure";
    case Errc::ExponentMismatch: return "ExponentMismatch";
    case Errc::BetaOutOfRange: return "BetaOutOfRange";
    case Errc::AxisOutOfRange: return "AxisOutOfRange";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::SymmetryViolation: return "SymmetryViolation";
    case Errc::DegenerateSweep: return "DegenerateSweep";
    case Errc::LatticeMismatch: return "LatticeMismatch";
    case Errc::Diverged: return "Diverged";
    case Errc::WrongMode: return "WrongMode";
    case Errc::WrongForceForm: return "WrongForceForm";
    case Errc::NoAdmissibleT: return "NoAdmissibleT";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::Parse: return "Parse";
    case Errc::Usage: return "Usage";
    case Errc::IO: return "IO";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace vlp
