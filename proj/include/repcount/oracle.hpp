#pragma once

// Slow reference implementations used to cross-check the production paths.
// Nothing here shares code with pca.hpp, spectral.hpp or peaks.hpp.

#include <vector>

#include "repcount/peaks.hpp"
#include "repcount/spectral.hpp"
#include "repcount/types.hpp"

namespace repcount::oracle {

inline constexpr Index kMaxDftLength = 4096;
inline constexpr Index kMaxEigenSize = 12;
inline constexpr Index kMaxPeakLength = 4096;

/// Literal O(N^2) summation.
Spectrum naive_dft(const Waveform& w);

struct EigenPairs {
  /// Descending.
  VectorX<double> values;
  /// Column i pairs with values[i]; unit norm, sign not canonicalized.
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is <= 1e-12
/// (relative to the matrix norm for large inputs).
EigenPairs jacobi_eigen(const Eigen::MatrixXd& symmetric);

/// Exhaustive scan implementing the peak contract without shortcuts.
std::vector<Index> exhaustive_peaks(const Waveform& w, const PeakParams& params);

/// Population covariance of the rows (divided by N), computed by explicit loops.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& frames);

}  // namespace repcount::oracle
