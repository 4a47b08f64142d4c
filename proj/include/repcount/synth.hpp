#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "repcount/types.hpp"

namespace repcount {

enum class WaveShape { sine, triangle, asymmetric_pulse };

std::string_view to_string(WaveShape s) noexcept;
std::optional<WaveShape> parse_wave_shape(std::string_view s) noexcept;

struct Distractor {
  /// Distractor period as a fraction of n_frames.
  double period_fraction = 0.5;
  /// Distractor amplitude relative to the unit-amplitude repetition signal.
  double relative_amplitude = 0.5;

  friend bool operator==(const Distractor&, const Distractor&) = default;
};

struct SynthSpec {
  Index n_frames = 200;
  Index dim = 16;
  double cycles = 5.0;
  WaveShape shape = WaveShape::sine;
  double amplitude_drift = 0.0;
  double frequency_drift = 0.0;
  /// Empty means noiseless.
  std::optional<double> noise_snr_db;
  std::optional<Distractor> distractor;
  std::uint64_t seed = 0;

  /// Throws SpecInvalid.
  void validate() const;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

struct SyntheticFixture {
  FeatureMatrix matrix;
  int ground_truth;
  /// The embedded 1-D signal s[u] before noise.
  VectorX<double> signal;
  /// Unit direction carrying the signal.
  VectorX<double> direction;
  std::optional<VectorX<double>> distractor_direction;
};

/// Builds F[u][j] = s[u] v[j] + d[u] w[j] + noise[u][j].
///
/// Randomness comes from std::mt19937_64 seeded with `seed`, consumed in this
/// order: D normals for v, D normals for w (only with a distractor), then N*D
/// normals for noise in row-major order (only with finite SNR). Normals use
/// the cosine branch of Box-Muller over 53-bit uniforms, one normal per two
/// draws, so output is bit-reproducible across standard libraries.
SyntheticFixture generate(const SynthSpec& spec);

/// Single-cycle shape value at phase in [0, 1); peak at 0.25, range [-1, 1].
double shape_value(WaveShape shape, double phase) noexcept;

}  // namespace repcount
