#include "repcount/pca.hpp"

namespace repcount {

PcaModel<double> fit_pca(const FeatureMatrix& m, Index k) { return fit_pca(m.values(), k); }

Waveform project(const FeatureMatrix& m, const PcaModel<double>& model, Index component) {
  return Waveform(project(m.values(), model, component));
}

Waveform first_component_waveform(const FeatureMatrix& m) { return project(m, fit_pca(m, 1), 0); }

std::vector<Waveform> leading_component_waveforms(const FeatureMatrix& m, Index count) {
  const Index k = std::clamp<Index>(count, 1, std::min(m.n_frames(), m.dim()));
  const auto model = fit_pca(m, k);
  std::vector<Waveform> out;
  out.reserve(static_cast<std::size_t>(k));
  for (Index c = 0; c < k; ++c) out.push_back(project(m, model, c));
  return out;
}

}  // namespace repcount
