#include "repcount/counter.hpp"

#include "repcount/pca.hpp"

namespace repcount {

std::string_view to_string(Fusion f) noexcept {
  switch (f) {
    case Fusion::spatial: return "spatial";
    case Fusion::temporal: return "temporal";
    case Fusion::concat: return "concat";
  }
  return "spatial";
}

std::optional<Fusion> parse_fusion(std::string_view s) noexcept {
  if (s == "spatial") return Fusion::spatial;
  if (s == "temporal") return Fusion::temporal;
  if (s == "concat") return Fusion::concat;
  return std::nullopt;
}

Spectrum dft(const Waveform& w) { return dft(w.samples()); }

Waveform idft_waveform(const Spectrum& s) { return Waveform(idft(s).samples); }

FilteredWaveform fmf(const Waveform& w, const FmfConfig& cfg) {
  auto out = fmf(w.samples(), cfg);
  return {Waveform(std::move(out.samples), w.frame_rate()), out.trace};
}

std::vector<Index> detect_peaks(const Waveform& w, const PeakParams& params) {
  return detect_peaks(w.samples(), params);
}

WaveformCount count_waveform(const Waveform& w, const FmfConfig& cfg, const PeakParams& params) {
  VectorX<double> signal = w.samples();
  WaveformCount result;
  if (cfg.enabled) {
    auto filtered = fmf(w.samples(), cfg);
    signal = std::move(filtered.samples);
    result.trace = filtered.trace;
  }
  auto upright = detect_peaks(signal, params);
  auto inverted = detect_peaks(VectorX<double>(-signal), params);
  result.negated = inverted.size() > upright.size();
  result.peaks = result.negated ? std::move(inverted) : std::move(upright);
  result.count = static_cast<int>(result.peaks.size());
  return result;
}

FeatureMatrix working_matrix(const FeatureMatrix* spatial, const FeatureMatrix* temporal, Fusion fusion) {
  switch (fusion) {
    case Fusion::spatial:
      if (!spatial) throw Error(Errc::MissingStream, "spatial stream required");
      return *spatial;
    case Fusion::temporal:
      if (!temporal) throw Error(Errc::MissingStream, "temporal stream required");
      return *temporal;
    case Fusion::concat: {
      if (!spatial || !temporal) throw Error(Errc::MissingStream, "concat fusion needs both streams");
      if (spatial->n_frames() != temporal->n_frames()) {
        throw Error(Errc::FrameCountMismatch, std::to_string(spatial->n_frames()) + " spatial vs " +
                                                  std::to_string(temporal->n_frames()) + " temporal frames");
      }
      FeatureMatrix::Storage joined(spatial->n_frames(), spatial->dim() + temporal->dim());
      joined << spatial->values(), temporal->values();
      return FeatureMatrix(std::move(joined));
    }
  }
  throw Error(Errc::InvalidConfig, "unknown fusion mode");
}

CountReport count_repetitions(const FeatureMatrix* spatial, const FeatureMatrix* temporal, const FmfConfig& cfg,
                              const PeakParams& params, Fusion fusion) {
  cfg.validate();
  params.validate();
  if (spatial && temporal && spatial->n_frames() != temporal->n_frames()) {
    throw Error(Errc::FrameCountMismatch, std::to_string(spatial->n_frames()) + " spatial vs " +
                                              std::to_string(temporal->n_frames()) + " temporal frames");
  }
  const FeatureMatrix m = working_matrix(spatial, temporal, fusion);
  auto counted = count_waveform(first_component_waveform(m), cfg, params);
  return {counted.count, std::move(counted.peaks), counted.trace, fusion};
}

}  // namespace repcount
