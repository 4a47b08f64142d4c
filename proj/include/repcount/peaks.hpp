#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "repcount/types.hpp"

namespace repcount {

struct PeakParams {
  /// Minimum prominence as a fraction of the waveform's p95 - p5 range.
  double min_prominence_fraction = 0.15;
  /// Surviving peaks are at least this many frames apart.
  Index min_separation = 3;

  void validate() const {
    if (!(min_prominence_fraction > 0.0 && min_prominence_fraction < 1.0)) {
      throw Error(Errc::InvalidConfig, "prominence fraction must lie in (0, 1)");
    }
    if (min_separation < 1) throw Error(Errc::InvalidConfig, "min separation must be >= 1");
  }

  friend bool operator==(const PeakParams&, const PeakParams&) = default;
};

/// Percentile with linear interpolation between order statistics, q in [0, 1].
template <typename Derived>
typename Derived::Scalar percentile(const Eigen::DenseBase<Derived>& x, double q) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> sorted(x.derived().data(), x.derived().data() + x.size());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const Scalar frac = static_cast<Scalar>(pos - static_cast<double>(lo));
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

namespace detail {

// Sparse table over a fixed array answering range-minimum queries in O(1).
template <typename Scalar>
class RangeMin {
 public:
  explicit RangeMin(const VectorX<Scalar>& x) {
    const auto n = static_cast<std::size_t>(x.size());
    levels_.emplace_back(x.data(), x.data() + n);
    for (std::size_t width = 2; width <= n; width *= 2) {
      const auto& prev = levels_.back();
      std::vector<Scalar> next(n - width + 1);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + width / 2]);
      levels_.push_back(std::move(next));
    }
  }

  /// Minimum over the closed range [lo, hi].
  Scalar query(Index lo, Index hi) const {
    const auto len = static_cast<std::size_t>(hi - lo + 1);
    const auto level = static_cast<std::size_t>(std::bit_width(len) - 1);
    const auto& row = levels_[level];
    return std::min(row[static_cast<std::size_t>(lo)], row[static_cast<std::size_t>(hi) + 1 - (std::size_t{1} << level)]);
  }

 private:
  std::vector<std::vector<Scalar>> levels_;
};

}  // namespace detail

/// Interior local maxima: w[i-1] < w[i] >= w[i+1].
template <typename Derived>
std::vector<Index> local_maxima(const Eigen::MatrixBase<Derived>& w) {
  std::vector<Index> out;
  for (Index i = 1; i + 1 < w.size(); ++i) {
    if (w[i - 1] < w[i] && w[i] >= w[i + 1]) out.push_back(i);
  }
  return out;
}

/// Topographic prominence of each candidate: height above the higher of the
/// two lowest points reached before the signal rises above the candidate
/// (or hits the border) on either side.
template <typename Derived>
std::vector<typename Derived::Scalar> prominences(const Eigen::MatrixBase<Derived>& w,
                                                  const std::vector<Index>& candidates) {
  using Scalar = typename Derived::Scalar;
  const VectorX<Scalar> x = w;
  const Index n = x.size();

  std::vector<Index> left_higher(static_cast<std::size_t>(n), -1);
  std::vector<Index> right_higher(static_cast<std::size_t>(n), n);
  std::vector<Index> stack;
  for (Index i = 0; i < n; ++i) {
    while (!stack.empty() && x[stack.back()] <= x[i]) stack.pop_back();
    if (!stack.empty()) left_higher[static_cast<std::size_t>(i)] = stack.back();
    stack.push_back(i);
  }
  stack.clear();
  for (Index i = n - 1; i >= 0; --i) {
    while (!stack.empty() && x[stack.back()] <= x[i]) stack.pop_back();
    if (!stack.empty()) right_higher[static_cast<std::size_t>(i)] = stack.back();
    stack.push_back(i);
  }

  const detail::RangeMin<Scalar> range_min(x);
  std::vector<Scalar> out;
  out.reserve(candidates.size());
  for (Index i : candidates) {
    const Scalar left = range_min.query(left_higher[static_cast<std::size_t>(i)] + 1, i);
    const Scalar right = range_min.query(i, right_higher[static_cast<std::size_t>(i)] - 1);
    out.push_back(x[i] - std::max(left, right));
  }
  return out;
}

/// Peak indices, ascending.
///
/// Candidates are interior local maxima whose prominence reaches
/// min_prominence_fraction * (p95 - p5). Among survivors closer than
/// min_separation, the higher one is kept (lower index on ties).
template <typename Derived>
std::vector<Index> detect_peaks(const Eigen::MatrixBase<Derived>& w, const PeakParams& params) {
  using Scalar = typename Derived::Scalar;
  if (w.size() < 3) return {};

  const VectorX<Scalar> x = w;
  const Scalar spread = percentile(x, 0.95) - percentile(x, 0.05);
  const Scalar threshold = static_cast<Scalar>(params.min_prominence_fraction) * spread;

  const auto candidates = local_maxima(x);
  const auto prom = prominences(x, candidates);
  std::vector<Index> kept;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (prom[c] >= threshold) kept.push_back(candidates[c]);
  }
  if (params.min_separation <= 1 || kept.size() < 2) return kept;

  std::vector<std::size_t> order(kept.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[kept[a]] > x[kept[b]]; });

  std::vector<bool> removed(kept.size(), false);
  for (std::size_t pos : order) {
    if (removed[pos]) continue;
    for (std::size_t j = pos; j-- > 0 && kept[pos] - kept[j] < params.min_separation;) removed[j] = true;
    for (std::size_t j = pos + 1; j < kept.size() && kept[j] - kept[pos] < params.min_separation; ++j) {
      removed[j] = true;
    }
  }
  std::vector<Index> out;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    if (!removed[c]) out.push_back(kept[c]);
  }
  return out;
}

std::vector<Index> detect_peaks(const Waveform& w, const PeakParams& params);

}  // namespace repcount
