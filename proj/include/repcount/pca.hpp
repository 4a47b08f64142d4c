#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "repcount/types.hpp"

namespace repcount {

/// Leading principal axes of a frame matrix.
///
/// `axes` holds one unit-norm axis per column (D x K), ordered by descending
/// eigenvalue of the population covariance (divided by N). Each axis is
/// sign-canonicalized so that its largest-magnitude entry is positive, the
/// lowest index winning ties.
template <typename Scalar>
struct PcaModel {
  VectorX<Scalar> mean;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> axes;
  VectorX<Scalar> eigenvalues;

  Index dim() const noexcept { return mean.size(); }
  Index components() const noexcept { return axes.cols(); }
};

namespace detail {

template <typename Derived>
void canonicalize_sign(Eigen::MatrixBase<Derived>&& axis) {
  Index best = 0;
  for (Index j = 1; j < axis.size(); ++j) {
    if (std::abs(axis[j]) > std::abs(axis[best])) best = j;
  }
  if (axis[best] < 0) axis = -axis;
}

// Fills columns [filled, K) with unit vectors orthogonal to everything before
// them. Used for null-space axes that the Gram route cannot recover.
template <typename Scalar>
void complete_orthonormal(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& axes, Index filled) {
  const Index dim = axes.rows();
  for (Index c = filled; c < axes.cols(); ++c) {
    VectorX<Scalar> best_vec;
    Scalar best_norm = -1;
    for (Index j = 0; j < dim; ++j) {
      VectorX<Scalar> r = VectorX<Scalar>::Unit(dim, j);
      for (int pass = 0; pass < 2; ++pass) {
        r -= axes.leftCols(c) * (axes.leftCols(c).transpose() * r);
      }
      const Scalar n = r.norm();
      if (n > best_norm) {
        best_norm = n;
        best_vec = r;
      }
    }
    axes.col(c) = best_vec / best_norm;
  }
}

template <typename Derived>
bool all_rows_equal(const Eigen::MatrixBase<Derived>& frames) {
  for (Index i = 1; i < frames.rows(); ++i) {
    if ((frames.row(i).array() != frames.row(0).array()).any()) return false;
  }
  return true;
}

}  // namespace detail

/// Fits the top-k principal axes of `frames` (rows are frames).
///
/// Uses the D x D covariance when D <= N and the N x N Gram matrix otherwise;
/// both give the same axes. Throws DegenerateMatrix when every frame is
/// identical and KTooLarge when k exceeds min(N, D).
template <typename Derived>
PcaModel<typename Derived::Scalar> fit_pca(const Eigen::MatrixBase<Derived>& frames, Index k) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Index n = frames.rows();
  const Index d = frames.cols();
  if (k < 1) throw Error(Errc::InvalidConfig, "component count must be positive");
  if (k > std::min(n, d)) {
    throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " exceeds min(frames, dim)=" + std::to_string(std::min(n, d)));
  }
  if (detail::all_rows_equal(frames)) throw Error(Errc::DegenerateMatrix, "all frames are identical");

  PcaModel<Scalar> model;
  model.mean = frames.colwise().mean().transpose();
  const Matrix centered = frames.rowwise() - model.mean.transpose();
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);

  model.axes.resize(d, k);
  model.eigenvalues.resize(k);

  if (d <= n) {
    Matrix cov = (centered.transpose() * centered) * inv_n;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success) throw Error(Errc::DegenerateMatrix, "eigendecomposition failed");
    for (Index c = 0; c < k; ++c) {
      model.eigenvalues[c] = solver.eigenvalues()[d - 1 - c];
      model.axes.col(c) = solver.eigenvectors().col(d - 1 - c);
    }
  } else {
    Matrix gram = (centered * centered.transpose()) * inv_n;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) throw Error(Errc::DegenerateMatrix, "eigendecomposition failed");
    const Scalar top = solver.eigenvalues()[n - 1];
    const Scalar floor = top * static_cast<Scalar>(std::max(n, d)) * std::numeric_limits<Scalar>::epsilon() * 16;
    Index recovered = 0;
    for (; recovered < k; ++recovered) {
      const Scalar lambda = solver.eigenvalues()[n - 1 - recovered];
      if (!(lambda > floor)) break;
      VectorX<Scalar> axis = centered.transpose() * solver.eigenvectors().col(n - 1 - recovered);
      model.axes.col(recovered) = axis / axis.norm();
      model.eigenvalues[recovered] = lambda;
    }
    for (Index c = recovered; c < k; ++c) model.eigenvalues[c] = 0;
    detail::complete_orthonormal(model.axes, recovered);
  }

  if (!(model.eigenvalues[0] > 0)) throw Error(Errc::DegenerateMatrix, "covariance has no positive eigenvalue");
  model.eigenvalues = model.eigenvalues.cwiseMax(Scalar(0));
  for (Index c = 0; c < k; ++c) detail::canonicalize_sign(model.axes.col(c));
  return model;
}

/// samples[i] = (row_i - mean) . axes[component]
template <typename Derived, typename Scalar>
VectorX<Scalar> project(const Eigen::MatrixBase<Derived>& frames, const PcaModel<Scalar>& model, Index component) {
  if (frames.cols() != model.dim()) {
    throw Error(Errc::DimensionMismatch,
                "matrix dim " + std::to_string(frames.cols()) + " vs model dim " + std::to_string(model.dim()));
  }
  if (component < 0 || component >= model.components()) {
    throw Error(Errc::BadComponentIndex,
                "component " + std::to_string(component) + " of " + std::to_string(model.components()));
  }
  return (frames.rowwise() - model.mean.transpose()) * model.axes.col(component);
}

PcaModel<double> fit_pca(const FeatureMatrix& m, Index k);
Waveform project(const FeatureMatrix& m, const PcaModel<double>& model, Index component);

/// The pipeline's canonical 1-D signal: projection onto the top axis.
Waveform first_component_waveform(const FeatureMatrix& m);

/// Projections onto the leading `count` axes (clamped to min(N, D)); a
/// diagnostic for inspecting how periodic structure spreads across components.
std::vector<Waveform> leading_component_waveforms(const FeatureMatrix& m, Index count = 10);

}  // namespace repcount
