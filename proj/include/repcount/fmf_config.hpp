#pragma once

#include <optional>
#include <vector>

namespace repcount {

/// One rung of the threshold ladder: band counts up to `max_band_count`
/// (unbounded when empty) select `alpha` keep-bins per spectral side.
struct LadderStage {
  std::optional<int> max_band_count;
  int alpha = 15;

  friend bool operator==(const LadderStage&, const LadderStage&) = default;
};

struct FmfConfig {
  std::vector<LadderStage> ladder = default_ladder();
  /// A bin is significant when its magnitude reaches this fraction of the strongest non-DC bin.
  double significance_fraction = 0.2;
  /// The high band starts at ceil(fraction * N), or at the smallest ladder alpha if that is lower.
  double high_band_start_fraction = 0.25;
  std::optional<int> fixed_alpha;
  /// When false the counter skips filtering entirely.
  bool enabled = true;

  static std::vector<LadderStage> default_ladder();

  /// Throws InvalidConfig on a malformed ladder or out-of-range fraction.
  void validate() const;

  int smallest_alpha() const;

  friend bool operator==(const FmfConfig&, const FmfConfig&) = default;
};

/// What the filter did to one waveform.
struct FmfTrace {
  int alpha = 0;
  int band_count = 0;
  double kept_energy_fraction = 1.0;

  friend bool operator==(const FmfTrace&, const FmfTrace&) = default;
};

}  // namespace repcount
