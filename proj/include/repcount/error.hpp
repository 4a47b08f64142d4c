#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace repcount {

enum class Errc {
  MissingFile,
  RaggedRows,
  NonNumericField,
  NonFiniteValue,
  TooFewFrames,
  InvalidDimension,
  BadMagic,
  TruncatedPayload,
  TrailingData,
  IoFailure,
  DegenerateMatrix,
  KTooLarge,
  DimensionMismatch,
  BadComponentIndex,
  AlphaOutOfRange,
  InvalidConfig,
  MissingStream,
  FrameCountMismatch,
  SpecInvalid,
  SizeExceedsOracleLimit,
  ManifestInvalid,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace repcount
