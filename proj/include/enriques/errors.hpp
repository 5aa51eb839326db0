#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace enriques {

// Error classes grouped by the CLI exit-code contract:
//   1 = domain validation, 2 = parse/format, 3 = field extension, 4 = resource cap.
enum class Errc {
  // domain (exit 1)
  ZeroPolynomial,
  MixedFields,
  DivisionByZero,
  NonUnitPivot,
  InvalidDiagram,
  LawViolation,
  NotAnOrdering,
  LoopDetected,
  SizeMismatch,
  NotARoot,
  NotMinimal,
  BadParams,
  ArityMismatch,
  ProximityClash,
  CollisionError,
  ForcedPointMissing,
  RealizationImpossible,
  ProximityInequalityViolated,
  NotStabilized,
  DuplicatePoints,
  NotFiniteColength,
  DualFieldInput,
  NotSquarefree,
  PointNotOnCurve,
  Internal,
  // parse / format (exit 2)
  ParseError,
  FormatError,
  UsageError,
  // field extension required (exit 3)
  FieldExtensionRequired,
  // resource caps (exit 4)
  DegreeOverflow,
  IterationCap,
  RootSearchOverflow,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::MixedFields: return "MixedFields";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NonUnitPivot: return "NonUnitPivot";
    case Errc::InvalidDiagram: return "InvalidDiagram";
    case Errc::LawViolation: return "LawViolation";
    case Errc::NotAnOrdering: return "NotAnOrdering";
    case Errc::LoopDetected: return "LoopDetected";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::NotARoot: return "NotARoot";
    case Errc::NotMinimal: return "NotMinimal";
    case Errc::BadParams: return "BadParams";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::ProximityClash: return "ProximityClash";
    case Errc::CollisionError: return "CollisionError";
    case Errc::ForcedPointMissing: return "ForcedPointMissing";
    case Errc::RealizationImpossible: return "RealizationImpossible";
    case Errc::ProximityInequalityViolated: return "ProximityInequalityViolated";
    case Errc::NotStabilized: return "NotStabilized";
    case Errc::DuplicatePoints: return "DuplicatePoints";
    case Errc::NotFiniteColength: return "NotFiniteColength";
    case Errc::DualFieldInput: return "DualFieldInput";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::PointNotOnCurve: return "PointNotOnCurve";
    case Errc::Internal: return "Internal";
    case Errc::ParseError: return "ParseError";
    case Errc::FormatError: return "FormatError";
    case Errc::UsageError: return "UsageError";
    case Errc::FieldExtensionRequired: return "FieldExtensionRequired";
    case Errc::DegreeOverflow: return "DegreeOverflow";
    case Errc::IterationCap: return "IterationCap";
    case Errc::RootSearchOverflow: return "RootSearchOverflow";
  }
  return "Unknown";
}

inline int errc_exit_code(Errc c) {
  switch (c) {
    case Errc::ParseError:
    case Errc::FormatError:
    case Errc::UsageError:
      return 2;
    case Errc::FieldExtensionRequired:
      return 3;
    case Errc::DegreeOverflow:
    case Errc::IterationCap:
    case Errc::RootSearchOverflow:
      return 4;
    default:
      return 1;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }
  int exit_code() const { return errc_exit_code(code_); }

  // Optional payload: offending vertex ids, parse offsets, and the like.
  Error& with_data(std::vector<long> d) {
    data_ = std::move(d);
    return *this;
  }
  const std::vector<long>& data() const { return data_; }

 private:
  Errc code_;
  std::vector<long> data_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

[[noreturn]] inline void fail(Errc code, const std::string& msg, std::vector<long> data) {
  throw Error(code, msg).with_data(std::move(data));
}

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Internal consistency checks; firing one indicates a bug, not bad input.
inline void check_internal(bool cond, const std::string& msg) {
  if (!cond) fail(Errc::Internal, msg);
}

}  // namespace enriques
