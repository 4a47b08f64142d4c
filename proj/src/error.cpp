#include "repcount/error.hpp"

namespace repcount {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::MissingFile: return "MissingFile";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::NonNumericField: return "NonNumericField";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::TrailingData: return "TrailingData";
    case Errc::IoFailure: return "IoFailure";
    case Errc::DegenerateMatrix: return "DegenerateMatrix";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BadComponentIndex: return "BadComponentIndex";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::MissingStream: return "MissingStream";
    case Errc::FrameCountMismatch: return "FrameCountMismatch";
    case Errc::SpecInvalid: return "SpecInvalid";
    case Errc::SizeExceedsOracleLimit: return "SizeExceedsOracleLimit";
    case Errc::ManifestInvalid: return "ManifestInvalid";
  }
  return "Unknown";
}

}  // namespace repcount
