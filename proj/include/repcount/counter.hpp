#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "repcount/fmf_config.hpp"
#include "repcount/peaks.hpp"
#include "repcount/spectral.hpp"
#include "repcount/types.hpp"

namespace repcount {

/// Which stream(s) feed the principal-component waveform. `concat` joins
/// spatial and temporal features frame by frame (D doubles).
enum class Fusion { spatial, temporal, concat };

std::string_view to_string(Fusion f) noexcept;
std::optional<Fusion> parse_fusion(std::string_view s) noexcept;

struct CountReport {
  int count = 0;
  std::vector<Index> peaks;
  FmfTrace trace;
  Fusion stream = Fusion::spatial;

  friend bool operator==(const CountReport&, const CountReport&) = default;
};

struct WaveformCount {
  int count = 0;
  std::vector<Index> peaks;
  FmfTrace trace;
  /// True when the peaks were found on the negated waveform.
  bool negated = false;
};

/// FMF (unless disabled) followed by peak detection on the waveform and on
/// its negation; the orientation with more peaks wins, ties keep the original.
WaveformCount count_waveform(const Waveform& w, const FmfConfig& cfg, const PeakParams& params);

/// Assembles the matrix a fusion mode works on. Throws MissingStream or FrameCountMismatch.
FeatureMatrix working_matrix(const FeatureMatrix* spatial, const FeatureMatrix* temporal, Fusion fusion);

/// Null pointers mean the stream is absent.
CountReport count_repetitions(const FeatureMatrix* spatial, const FeatureMatrix* temporal, const FmfConfig& cfg,
                              const PeakParams& params, Fusion fusion);

}  // namespace repcount
