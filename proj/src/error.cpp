#include "nashlab/error.hpp"

namespace nashlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BasePointNotOnVariety: return "BasePointNotOnVariety";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::UnsupportedSpec: return "UnsupportedSpec";
    case ErrorKind::DegenerateFiber: return "DegenerateFiber";
    case ErrorKind::NonTransversalProjection: return "NonTransversalProjection";
    case ErrorKind::InconsistentParity: return "InconsistentParity";
    case ErrorKind::BranchPairingAmbiguous: return "BranchPairingAmbiguous";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::NotOnVariety: return "NotOnVariety";
    case ErrorKind::NotInjective: return "NotInjective";
    case ErrorKind::SingleBranch: return "SingleBranch";
    case ErrorKind::InsufficientScales: return "InsufficientScales";
    case ErrorKind::ScaleTooLarge: return "ScaleTooLarge";
    case ErrorKind::DerivativeBoundViolated: return "DerivativeBoundViolated";
    case ErrorKind::DerivativeVanishes: return "DerivativeVanishes";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::InputError: return "InputError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace nashlab
