#include "repcount/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace repcount {

namespace {

class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
};

VectorX<double> random_unit(NormalSource& rng, Index dim) {
  VectorX<double> v(dim);
  for (Index j = 0; j < dim; ++j) v[j] = rng.next();
  return v / v.norm();
}

}  // namespace

std::string_view to_string(WaveShape s) noexcept {
  switch (s) {
    case WaveShape::sine: return "sine";
    case WaveShape::triangle: return "triangle";
    case WaveShape::asymmetric_pulse: return "asymmetric_pulse";
  }
  return "sine";
}

std::optional<WaveShape> parse_wave_shape(std::string_view s) noexcept {
  if (s == "sine") return WaveShape::sine;
  if (s == "triangle") return WaveShape::triangle;
  if (s == "asymmetric_pulse") return WaveShape::asymmetric_pulse;
  return std::nullopt;
}

void SynthSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::SpecInvalid, what); };
  if (n_frames < 2) fail("n_frames must be >= 2");
  if (dim < 1) fail("dim must be >= 1");
  if (!(cycles > 0.0) || !std::isfinite(cycles)) fail("cycles must be positive");
  if (static_cast<double>(n_frames) < 8.0 * cycles) fail("need at least 8 frames per cycle");
  if (!(amplitude_drift >= 0.0) || !(frequency_drift >= 0.0)) fail("drifts must be non-negative");
  if (noise_snr_db && !(*noise_snr_db > 0.0)) fail("finite SNR must be positive");
  if (distractor) {
    if (dim < 2) fail("a distractor needs dim >= 2");
    if (!(distractor->period_fraction > 0.0)) fail("distractor period fraction must be positive");
    if (!(distractor->relative_amplitude >= 0.0)) fail("distractor amplitude must be non-negative");
  }
}

double shape_value(WaveShape shape, double phase) noexcept {
  constexpr double pi = std::numbers::pi;
  switch (shape) {
    case WaveShape::sine:
      return std::sin(2.0 * pi * phase);
    case WaveShape::triangle: {
      const double shifted = phase + 0.25 - std::floor(phase + 0.25);
      return 1.0 - 4.0 * std::abs(shifted - 0.5);
    }
    case WaveShape::asymmetric_pulse:
      // Fast rise over the first quarter cycle, slow fall over the rest.
      if (phase < 0.25) return -std::cos(pi * phase / 0.25);
      return std::cos(pi * (phase - 0.25) / 0.75);
  }
  return 0.0;
}

SyntheticFixture generate(const SynthSpec& spec) {
  spec.validate();
  const Index n = spec.n_frames;
  const Index d = spec.dim;

  // Phase in cycles, warped so the instantaneous rate grows linearly by
  // frequency_drift per cycle while the total stays exactly `cycles`.
  const double warp = spec.frequency_drift * spec.cycles;
  auto progress = [&](double t) { return t + 0.5 * warp * t * t; };
  const double total = progress(1.0);

  VectorX<double> signal(n);
  for (Index u = 0; u < n; ++u) {
    const double cycles_done = spec.cycles * progress(static_cast<double>(u) / static_cast<double>(n)) / total;
    const double amplitude = 1.0 + spec.amplitude_drift * cycles_done;
    signal[u] = amplitude * shape_value(spec.shape, cycles_done - std::floor(cycles_done));
  }

  NormalSource rng(spec.seed);
  VectorX<double> direction = random_unit(rng, d);
  FeatureMatrix::Storage values = signal * direction.transpose();

  std::optional<VectorX<double>> distractor_direction;
  if (spec.distractor) {
    VectorX<double> w = random_unit(rng, d);
    for (int pass = 0; pass < 2; ++pass) w -= direction * direction.dot(w);
    w /= w.norm();
    const double period = spec.distractor->period_fraction * static_cast<double>(n);
    VectorX<double> wave(n);
    for (Index u = 0; u < n; ++u) {
      wave[u] = spec.distractor->relative_amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(u) / period);
    }
    values += wave * w.transpose();
    distractor_direction = std::move(w);
  }

  if (spec.noise_snr_db) {
    const double cell_power = signal.squaredNorm() / static_cast<double>(n * d);
    const double sigma = std::sqrt(cell_power / std::pow(10.0, *spec.noise_snr_db / 10.0));
    for (Index k = 0; k < values.size(); ++k) values.data()[k] += sigma * rng.next();
  }

  return {FeatureMatrix(std::move(values)), static_cast<int>(std::floor(spec.cycles)), std::move(signal),
          std::move(direction), std::move(distractor_direction)};
}

}  // namespace repcount
