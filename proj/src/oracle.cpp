#include "repcount/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace repcount::oracle {

Spectrum naive_dft(const Waveform& w) {
  const Index n = w.size();
  if (n > kMaxDftLength) throw Error(Errc::SizeExceedsOracleLimit, "naive DFT limited to 4096 samples");
  Spectrum::Coefficients out(n);
  for (Index k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (Index u = 0; u < n; ++u) {
      // Reduce k*u mod N first so the angle stays accurate for large products.
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * u) % n) / static_cast<double>(n);
      acc += w[u] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return Spectrum(std::move(out));
}

EigenPairs jacobi_eigen(const Eigen::MatrixXd& symmetric) {
  const Index n = symmetric.rows();
  if (n != symmetric.cols()) throw Error(Errc::DimensionMismatch, "matrix is not square");
  if (n > kMaxEigenSize) throw Error(Errc::SizeExceedsOracleLimit, "Jacobi oracle limited to 12x12");

  std::vector<std::vector<double>> a(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<std::vector<double>> v(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  double scale = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      a[i][j] = 0.5 * (symmetric(i, j) + symmetric(j, i));
      scale += a[i][j] * a[i][j];
    }
    v[i][i] = 1.0;
  }
  const double tolerance = 1e-12 * std::max(1.0, std::sqrt(scale));

  auto off_norm = [&] {
    double s = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (i != j) s += a[i][j] * a[i][j];
    return std::sqrt(s);
  };

  EigenPairs out;
  while (off_norm() > tolerance && out.sweeps < 100) {
    ++out.sweeps;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return a[x][x] > a[y][y]; });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index c = 0; c < n; ++c) {
    out.values[c] = a[order[c]][order[c]];
    for (Index r = 0; r < n; ++r) out.vectors(r, c) = v[r][order[c]];
  }
  return out;
}

Eigen::MatrixXd covariance(const Eigen::MatrixXd& frames) {
  const Index n = frames.rows();
  const Index d = frames.cols();
  std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < n; ++i) mean[j] += frames(i, j);
    mean[j] /= static_cast<double>(n);
  }
  Eigen::MatrixXd cov(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      double s = 0.0;
      for (Index i = 0; i < n; ++i) s += (frames(i, a) - mean[a]) * (frames(i, b) - mean[b]);
      cov(a, b) = s / static_cast<double>(n);
    }
  }
  return cov;
}

namespace {

double interpolated_percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (pos - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

}  // namespace

std::vector<Index> exhaustive_peaks(const Waveform& w, const PeakParams& params) {
  const Index n = w.size();
  if (n > kMaxPeakLength) throw Error(Errc::SizeExceedsOracleLimit, "peak oracle limited to 4096 samples");
  std::vector<double> x(w.samples().data(), w.samples().data() + n);
  if (n < 3) return {};

  const double threshold =
      params.min_prominence_fraction * (interpolated_percentile(x, 0.95) - interpolated_percentile(x, 0.05));

  std::vector<Index> candidates;
  for (Index i = 1; i < n - 1; ++i) {
    if (!(x[i - 1] < x[i] && x[i] >= x[i + 1])) continue;
    double left_min = x[i];
    for (Index j = i - 1; j >= 0 && x[j] <= x[i]; --j) left_min = std::min(left_min, x[j]);
    double right_min = x[i];
    for (Index j = i + 1; j < n && x[j] <= x[i]; ++j) right_min = std::min(right_min, x[j]);
    if (x[i] - std::max(left_min, right_min) >= threshold) candidates.push_back(i);
  }

  // Repeatedly accept the highest remaining candidate (lowest index on ties)
  // and drop everything within min_separation of it.
  std::vector<Index> accepted;
  while (!candidates.empty()) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c) {
      if (x[candidates[c]] > x[candidates[best]]) best = c;
    }
    const Index winner = candidates[best];
    accepted.push_back(winner);
    std::vector<Index> rest;
    for (Index c : candidates) {
      if (c != winner && std::abs(c - winner) >= params.min_separation) rest.push_back(c);
    }
    candidates = std::move(rest);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

}  // namespace repcount::oracle
