#pragma once

#include <stdexcept>
#include <string>

namespace lvthick {

// Stable error identifiers. The CLI maps each to its own nonzero exit code,
// so the values below are part of the tool's contract.
enum class Errc : int {
  BadMagic = 2,
  HeaderParse = 3,
  PayloadSizeMismatch = 4,
  UnknownDtype = 5,
  NonPositiveTarget = 6,
  EmptyMask = 7,
  DimensionMismatch = 8,
  PhaseIndexOutOfRange = 9,
  DuplicatePhaseIndex = 10,
  NoEpicardialSurface = 11,
  NoEndocardialSurface = 12,
  NoSeeds = 13,
  EmptyMap = 14,
  LengthMismatch = 15,
  TooFewSamples = 16,
  ZeroVariance = 17,
  CaseIdMismatch = 18,
  EmptyInput = 19,
  DefectOutsideVolume = 20,
  NotDivisible = 21,
  NothingToEmit = 22,
  IoFailure = 23,
  InvalidArgument = 24,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace lvthick
