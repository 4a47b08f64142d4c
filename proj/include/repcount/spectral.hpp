#pragma once

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "repcount/fmf_config.hpp"
#include "repcount/types.hpp"

namespace repcount {

/// Full-length DFT coefficients of a length-N signal, bin 0 first.
template <typename Scalar>
class BasicSpectrum {
 public:
  using Complex = std::complex<Scalar>;
  using Coefficients = VectorX<Complex>;

  explicit BasicSpectrum(Coefficients coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() < 2) throw Error(Errc::TooFewFrames, "spectrum needs at least 2 bins");
    if (!coefficients_.real().array().isFinite().all() || !coefficients_.imag().array().isFinite().all()) {
      throw Error(Errc::NonFiniteValue, "spectrum contains NaN or Inf");
    }
  }

  Index size() const noexcept { return coefficients_.size(); }
  const Coefficients& coefficients() const noexcept { return coefficients_; }
  Complex operator[](Index k) const { return coefficients_[k]; }

 private:
  Coefficients coefficients_;
};

using Spectrum = BasicSpectrum<double>;

template <typename Scalar>
struct InverseDft {
  VectorX<Scalar> samples;
  /// Largest |imag| before it was discarded; above 1e-6 the spectrum was not conjugate-symmetric.
  Scalar imaginary_residue = 0;

  bool asymmetric() const noexcept { return imaginary_residue > Scalar(1e-6); }
};

/// X[k] = sum_u w[u] exp(-2 pi i k u / N), any N.
template <typename Derived>
BasicSpectrum<typename Derived::Scalar> dft(const Eigen::MatrixBase<Derived>& samples) {
  using Scalar = typename Derived::Scalar;
  const Index n = samples.size();
  if (n < 2) throw Error(Errc::TooFewFrames, "dft needs at least 2 samples");
  VectorX<Scalar> in = samples;
  typename BasicSpectrum<Scalar>::Coefficients out(n);
  Eigen::FFT<Scalar> fft;
  fft.fwd(out, in);
  return BasicSpectrum<Scalar>(std::move(out));
}

/// w[u] = Re((1/N) sum_k X[k] exp(+2 pi i k u / N)).
template <typename Scalar>
InverseDft<Scalar> idft(const BasicSpectrum<Scalar>& spectrum) {
  typename BasicSpectrum<Scalar>::Coefficients in = spectrum.coefficients();
  typename BasicSpectrum<Scalar>::Coefficients out(spectrum.size());
  Eigen::FFT<Scalar> fft;
  fft.inv(out, in);
  InverseDft<Scalar> result;
  result.samples = out.real();
  result.imaginary_residue = out.imag().cwiseAbs().maxCoeff();
  return result;
}

/// Largest legal keep-band for a length-N spectrum: floor(N/2) + 1, which keeps every bin.
constexpr Index max_alpha(Index n) noexcept { return std::max<Index>(2, n / 2 + 1); }

/// Distance of bin k from DC on the circle of N bins.
constexpr Index fold_bin(Index k, Index n) noexcept { return std::min(k, n - k); }

/// Zeroes every bin with min(k, N-k) >= alpha. Conjugate symmetry is preserved.
template <typename Scalar>
BasicSpectrum<Scalar> band_keep_filter(const BasicSpectrum<Scalar>& spectrum, int alpha) {
  const Index n = spectrum.size();
  if (alpha < 2 || alpha > max_alpha(n)) {
    throw Error(Errc::AlphaOutOfRange,
                "alpha=" + std::to_string(alpha) + " outside [2, " + std::to_string(max_alpha(n)) + "]");
  }
  auto coeffs = spectrum.coefficients();
  for (Index k = 0; k < n; ++k) {
    if (fold_bin(k, n) >= alpha) coeffs[k] = 0;
  }
  return BasicSpectrum<Scalar>(std::move(coeffs));
}

/// First bin of the high band for a length-N spectrum under `cfg`.
inline Index high_band_start(Index n, const FmfConfig& cfg) {
  const auto by_fraction = static_cast<Index>(std::ceil(cfg.high_band_start_fraction * static_cast<double>(n)));
  return std::max<Index>(1, std::min<Index>(by_fraction, cfg.smallest_alpha()));
}

/// Number of significant bins in the high band (see FmfConfig).
template <typename Scalar>
int high_band_count(const BasicSpectrum<Scalar>& spectrum, const FmfConfig& cfg) {
  const Index n = spectrum.size();
  const Index half = n / 2;
  Scalar strongest = 0;
  for (Index k = 1; k <= half; ++k) strongest = std::max(strongest, std::abs(spectrum[k]));
  // Rounding residue next to a large DC term counts as an empty spectrum.
  const Scalar floor = std::max(strongest, std::abs(spectrum[0])) * static_cast<Scalar>(1e-12);
  if (!(strongest > floor)) return 0;
  const Scalar cut = static_cast<Scalar>(cfg.significance_fraction) * strongest;
  int count = 0;
  for (Index k = high_band_start(n, cfg); k <= half; ++k) {
    if (std::abs(spectrum[k]) >= cut) ++count;
  }
  return count;
}

inline int clamp_alpha(int alpha, Index n) {
  return static_cast<int>(std::clamp<Index>(alpha, 2, max_alpha(n)));
}

inline int ladder_alpha(const FmfConfig& cfg, int band_count) {
  for (const auto& stage : cfg.ladder) {
    if (!stage.max_band_count || *stage.max_band_count >= band_count) return stage.alpha;
  }
  return cfg.ladder.back().alpha;
}

template <typename Scalar>
int select_alpha(const BasicSpectrum<Scalar>& spectrum, const FmfConfig& cfg) {
  const Index n = spectrum.size();
  if (cfg.fixed_alpha) return clamp_alpha(*cfg.fixed_alpha, n);
  return clamp_alpha(ladder_alpha(cfg, high_band_count(spectrum, cfg)), n);
}

/// Share of spectral energy in bins with min(k, N-k) < alpha; 1 for an all-zero spectrum.
template <typename Scalar>
double kept_energy_fraction(const BasicSpectrum<Scalar>& spectrum, int alpha) {
  const Index n = spectrum.size();
  Scalar kept = 0;
  Scalar total = 0;
  for (Index k = 0; k < n; ++k) {
    const Scalar e = std::norm(spectrum[k]);
    total += e;
    if (fold_bin(k, n) < alpha) kept += e;
  }
  return total > 0 ? static_cast<double>(kept / total) : 1.0;
}

template <typename Scalar>
struct FmfOutput {
  VectorX<Scalar> samples;
  FmfTrace trace;
  Scalar imaginary_residue = 0;
};

/// Transform, keep the adaptively chosen low band, transform back.
template <typename Derived>
FmfOutput<typename Derived::Scalar> fmf(const Eigen::MatrixBase<Derived>& samples, const FmfConfig& cfg) {
  using Scalar = typename Derived::Scalar;
  const auto spectrum = dft(samples);
  FmfOutput<Scalar> out;
  out.trace.band_count = high_band_count(spectrum, cfg);
  out.trace.alpha = cfg.fixed_alpha ? clamp_alpha(*cfg.fixed_alpha, spectrum.size())
                                    : clamp_alpha(ladder_alpha(cfg, out.trace.band_count), spectrum.size());
  out.trace.kept_energy_fraction = kept_energy_fraction(spectrum, out.trace.alpha);
  auto inverse = idft(band_keep_filter(spectrum, out.trace.alpha));
  out.samples = std::move(inverse.samples);
  out.imaginary_residue = inverse.imaginary_residue;
  return out;
}

Spectrum dft(const Waveform& w);
Waveform idft_waveform(const Spectrum& s);

struct FilteredWaveform {
  Waveform waveform;
  FmfTrace trace;
};

FilteredWaveform fmf(const Waveform& w, const FmfConfig& cfg);

}  // namespace repcount
