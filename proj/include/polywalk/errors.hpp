#pragma once

#include <stdexcept>
#include <string>

namespace pw {

enum class Errc {
  DimensionMismatch,
  RankDeficient,
  EmptyInterior,
  NotInterior,
  UnboundedDirection,
  DegeneratePair,
  NoConvergence,
  FactorizationFailure,
  SingularSystem,
  BadParams,
  RejectionStall,
  TooFewSamples,
  DegenerateInput,
  NoMove,
  Io,
};

// Single exception type carrying a machine-checkable code; the C API maps the
// code to a status enum and keeps the message for pw_last_error().
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::EmptyInterior: return "EmptyInterior";
    case Errc::NotInterior: return "NotInterior";
    case Errc::UnboundedDirection: return "UnboundedDirection";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::FactorizationFailure: return "FactorizationFailure";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::BadParams: return "BadParams";
    case Errc::RejectionStall: return "RejectionStall";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NoMove: return "NoMove";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace pw
