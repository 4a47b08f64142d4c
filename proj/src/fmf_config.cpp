#include "repcount/fmf_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repcount/error.hpp"

namespace repcount {

std::vector<LadderStage> FmfConfig::default_ladder() {
  return {{0, 15}, {2, 55}, {5, 80}, {std::nullopt, 110}};
}

void FmfConfig::validate() const {
  if (ladder.empty()) throw Error(Errc::InvalidConfig, "threshold ladder is empty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto& stage = ladder[i];
    if (stage.alpha < 2) throw Error(Errc::InvalidConfig, "ladder alpha must be >= 2");
    const bool last = i + 1 == ladder.size();
    if (last != !stage.max_band_count.has_value()) {
      throw Error(Errc::InvalidConfig, "only the last ladder bound may be (and must be) unbounded");
    }
    if (stage.max_band_count && *stage.max_band_count < 0) {
      throw Error(Errc::InvalidConfig, "ladder bounds must be non-negative");
    }
    if (i > 0 && stage.max_band_count && !(*stage.max_band_count > *ladder[i - 1].max_band_count)) {
      throw Error(Errc::InvalidConfig, "ladder bounds must be strictly increasing");
    }
  }
  if (!(significance_fraction > 0.0 && significance_fraction < 1.0)) {
    throw Error(Errc::InvalidConfig, "significance fraction must lie in (0, 1)");
  }
  if (!(high_band_start_fraction > 0.0 && high_band_start_fraction <= 0.5)) {
    throw Error(Errc::InvalidConfig, "high band start fraction must lie in (0, 0.5]");
  }
  if (fixed_alpha && *fixed_alpha < 1) throw Error(Errc::InvalidConfig, "fixed alpha must be positive");
}

int FmfConfig::smallest_alpha() const {
  int a = ladder.empty() ? 2 : ladder.front().alpha;
  for (const auto& s : ladder) a = std::min(a, s.alpha);
  return a;
}

}  // namespace repcount
