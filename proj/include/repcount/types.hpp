#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string_view>
#include <utility>

#include "repcount/error.hpp"

namespace repcount {

using Index = Eigen::Index;

template <typename Scalar>
using RowMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.derived().array().isFinite().all();
}

/// N frames by D feature values, row-major. Immutable once constructed.
class FeatureMatrix {
 public:
  using Storage = RowMatrixX<double>;

  /// Validates n_frames >= 2, dim >= 1 and finiteness.
  explicit FeatureMatrix(Storage values) : values_(std::move(values)) {
    if (values_.cols() < 1) throw Error(Errc::InvalidDimension, "feature dimension must be at least 1");
    if (values_.rows() < 2) throw Error(Errc::TooFewFrames, "need at least 2 frames, got " + std::to_string(values_.rows()));
    if (!all_finite(values_)) throw Error(Errc::NonFiniteValue, "feature matrix contains NaN or Inf");
  }

  Index n_frames() const noexcept { return values_.rows(); }
  Index dim() const noexcept { return values_.cols(); }
  const Storage& values() const noexcept { return values_; }

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           (a.values_.array() == b.values_.array()).all();
  }

 private:
  Storage values_;
};

enum class StreamKind { spatial, temporal };

constexpr std::string_view to_string(StreamKind s) noexcept {
  return s == StreamKind::spatial ? "spatial" : "temporal";
}

/// A real 1-D signal sampled once per frame.
class Waveform {
 public:
  explicit Waveform(VectorX<double> samples, std::optional<double> frame_rate = std::nullopt)
      : samples_(std::move(samples)), frame_rate_(frame_rate) {
    if (samples_.size() < 2) throw Error(Errc::TooFewFrames, "waveform needs at least 2 samples");
    if (!all_finite(samples_)) throw Error(Errc::NonFiniteValue, "waveform contains NaN or Inf");
    if (frame_rate_ && !(*frame_rate_ > 0.0)) throw Error(Errc::InvalidConfig, "frame rate must be positive");
  }

  Index size() const noexcept { return samples_.size(); }
  const VectorX<double>& samples() const noexcept { return samples_; }
  double operator[](Index i) const { return samples_[i]; }
  std::optional<double> frame_rate() const noexcept { return frame_rate_; }

 private:
  VectorX<double> samples_;
  std::optional<double> frame_rate_;
};

}  // namespace repcount
