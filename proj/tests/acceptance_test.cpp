// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "repcount/counter.hpp"
#include "repcount/eval.hpp"
#include "repcount/matrix_io.hpp"
#include "repcount/oracle.hpp"
#include "repcount/pca.hpp"
#include "repcount/report.hpp"
#include "repcount/spectral.hpp"
#include "repcount/synth.hpp"

using namespace repcount;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  /// Everything the criterion computed; compared across runs for determinism.
  Json record = Json::object();
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

VectorX<double> normals(std::mt19937_64& rng, Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VectorX<double> v(n);
  for (Index i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

double max_abs(const auto& x) { return x.size() ? static_cast<double>(x.cwiseAbs().maxCoeff()) : 0.0; }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FeatureMatrix scaled(const FeatureMatrix& m, double c) { return FeatureMatrix(FeatureMatrix::Storage(m.values() * c)); }

int count_of(const FeatureMatrix& m, const FmfConfig& cfg = FmfConfig{}) {
  return count_repetitions(&m, nullptr, cfg, PeakParams{}, Fusion::spatial).count;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(1001);
  const Index lengths[] = {31, 32, 100, 257, 1024};
  double dft_worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto w = normals(rng, lengths[i % 5]);
    dft_worst = std::max(dft_worst, max_abs(dft(w).coefficients() - oracle::naive_dft(Waveform(w)).coefficients()));
  }

  double pca_worst = 0.0;
  std::uniform_int_distribution<int> dims(1, 12);
  for (int i = 0; i < 100; ++i) {
    const Index d = dims(rng);
    const Index n = std::uniform_int_distribution<Index>(d + 1, 24)(rng);
    FeatureMatrix::Storage x(n, d);
    for (Index r = 0; r < n; ++r) x.row(r) = normals(rng, d).transpose();
    const FeatureMatrix m(x);
    const auto model = fit_pca(m, d);
    const auto ref = oracle::jacobi_eigen(oracle::covariance(m.values()));
    for (Index c = 0; c < d; ++c) {
      VectorX<double> expected = ref.vectors.col(c);
      if (expected.dot(model.axes.col(c)) < 0) expected = -expected;
      pca_worst = std::max(pca_worst, max_abs(model.axes.col(c) - expected));
    }
  }

  int peak_mismatches = 0;
  std::uniform_real_distribution<double> gammas(0.01, 0.6);
  std::uniform_int_distribution<int> seps(1, 8);
  std::uniform_int_distribution<int> levels(0, 5);
  for (int i = 0; i < 1000; ++i) {
    VectorX<double> w = normals(rng, 64);
    if (i % 2) w = w.unaryExpr([&](double) { return static_cast<double>(levels(rng)); });
    const PeakParams p{gammas(rng), seps(rng)};
    peak_mismatches += detect_peaks(w, p) != oracle::exhaustive_peaks(Waveform(w), p);
  }

  o.pass = dft_worst <= 1e-9 && pca_worst <= 1e-7 && peak_mismatches == 0;
  o.detail = fmt("dft max diff %.3g, pca axis max diff %.3g, peak mismatches %d/1000", dft_worst, pca_worst,
                 peak_mismatches);
  o.record = {{"dft", dft_worst}, {"pca", pca_worst}, {"peaks", peak_mismatches}};
  return o;
}

Outcome round_trip_and_symmetry() {
  Outcome o;
  std::mt19937_64 rng(2002);
  std::uniform_int_distribution<Index> lengths(2, 2048);
  double identity = 0.0, residue = 0.0, idempotence = 0.0, parseval = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Index n = lengths(rng);
    const auto w = normals(rng, n, std::pow(10.0, static_cast<double>(i % 7) - 3.0));
    const auto s = dft(w);
    const double scale = std::max(1e-300, max_abs(w));
    identity = std::max(identity, max_abs(idft(s).samples - w) / std::max(1.0, scale));
    residue = std::max(residue, fmf(w, FmfConfig{}).imaginary_residue / std::max(1.0, scale));
    const int alpha = std::uniform_int_distribution<int>(2, static_cast<int>(max_alpha(n)))(rng);
    const auto once = band_keep_filter(s, alpha);
    idempotence = std::max(idempotence, max_abs(band_keep_filter(once, alpha).coefficients() - once.coefficients()));
    const double time_energy = w.squaredNorm();
    const double freq_energy = s.coefficients().squaredNorm() / static_cast<double>(n);
    parseval = std::max(parseval, std::abs(time_energy - freq_energy) / time_energy);
  }
  o.pass = identity <= 1e-9 && residue <= 1e-9 && idempotence == 0.0 && parseval <= 1e-9;
  o.detail = fmt("idft(dft) %.3g, fmf residue %.3g, idempotence %.3g, parseval rel %.3g", identity, residue,
                 idempotence, parseval);
  o.record = {{"identity", identity}, {"residue", residue}, {"idempotence", idempotence}, {"parseval", parseval}};
  return o;
}

Outcome exact_clean_counts() {
  Outcome o;
  int correct = 0, total = 0;
  Json misses = Json::array();
  for (auto shape : {WaveShape::sine, WaveShape::triangle, WaveShape::asymmetric_pulse}) {
    for (int k = 4; k <= 50; ++k) {
      SynthSpec spec;
      spec.n_frames = 16 * k;
      spec.dim = 32;
      spec.cycles = k;
      spec.shape = shape;
      spec.seed = static_cast<std::uint64_t>(k);
      const int got = count_of(generate(spec).matrix);
      ++total;
      if (got == k) {
        ++correct;
      } else {
        misses.push_back({{"shape", to_string(shape)}, {"K", k}, {"count", got}});
      }
    }
  }
  o.pass = correct == 141 && total == 141;
  o.detail = fmt("%d/%d exact", correct, total);
  o.record = {{"correct", correct}, {"misses", misses}};
  return o;
}

// D = 1 so the per-cell SNR is also the SNR of the waveform the counter sees.
SynthSpec noisy_spec(int i) {
  SynthSpec spec;
  const int k = 4 + (i * 7) % 47;
  spec.n_frames = 16 * k;
  spec.dim = 1;
  spec.cycles = k;
  spec.shape = static_cast<WaveShape>(i % 3);
  spec.noise_snr_db = 10.0;
  spec.seed = 1000 + static_cast<std::uint64_t>(i);
  return spec;
}

Outcome noise_robustness() {
  Outcome o;
  int on = 0, off = 0;
  Json counts = Json::array();
  FmfConfig disabled;
  disabled.enabled = false;
  for (int i = 0; i < 200; ++i) {
    const auto spec = noisy_spec(i);
    const auto m = generate(spec).matrix;
    const int k = static_cast<int>(spec.cycles);
    const int with = count_of(m);
    const int without = count_of(m, disabled);
    on += std::abs(with - k) <= 1;
    off += std::abs(without - k) <= 1;
    counts.push_back({k, with, without});
  }
  o.pass = on >= 190 && off < on;
  o.detail = fmt("within +-1: FMF on %d/200, FMF off %d/200", on, off);
  o.record = {{"on", on}, {"off", off}, {"counts", counts}};
  return o;
}

Outcome multi_stage_vs_single() {
  Outcome o;
  // Same clip length for both speeds, as in a fixed-duration video set.
  std::vector<LoadedEntry> entries;
  for (int i = 0; i < 20; ++i) {
    const int k = i % 2 ? 40 : 5;
    SynthSpec spec;
    spec.n_frames = 640;
    spec.dim = 32;
    spec.cycles = k;
    spec.shape = static_cast<WaveShape>((i / 2) % 3);
    spec.noise_snr_db = 10.0;
    spec.seed = 5000 + static_cast<std::uint64_t>(i);
    LoadedEntry e;
    e.entry.id = (k == 5 ? "slow" : "fast") + std::to_string(i);
    e.entry.ground_truth = k;
    e.entry.spatial_path = "memory";
    e.spatial = generate(spec).matrix;
    entries.push_back(std::move(e));
  }
  const std::vector<int> alphas = {10, 15, 20, 25, 30, 35, 55, 80, 110};
  const auto rows = sweep_thresholds(entries, alphas, EvalSettings{}, 0);
  const double multi = rows.back().metrics.mae;
  double best_single = 1e300;
  double best_narrow = 1e300;
  int best_alpha = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    if (*rows[i].alpha <= 35) best_narrow = std::min(best_narrow, rows[i].metrics.mae);
    if (rows[i].metrics.mae < best_single) {
      best_single = rows[i].metrics.mae;
      best_alpha = *rows[i].alpha;
    }
  }
  std::size_t failures = 0;
  for (const auto& r : rows) failures += r.failures;
  o.pass = failures == 0 && multi <= best_single;
  o.detail = fmt("multi-stage MAE %.4f, best single alpha %d MAE %.4f, best alpha <= 35 MAE %.4f", multi, best_alpha,
                 best_single, best_narrow);
  o.record = to_json(rows, EvalSettings{});
  return o;
}

Outcome metric_arithmetic() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "repcount_acceptance_metrics";
  fs::create_directories(dir);
  auto save = [&](const std::string& name, int cycles) {
    SynthSpec spec;
    spec.cycles = cycles;
    spec.n_frames = 20 * cycles;
    spec.dim = 8;
    spec.seed = static_cast<std::uint64_t>(cycles);
    save_binary_matrix(generate(spec).matrix, dir / name);
  };
  save("nine.bin", 9);
  save("ten.bin", 10);
  save("fifteen.bin", 15);
  write_file(dir / "single.json", R"([{"id":"a","spatial":"nine.bin","ground_truth":10}])");
  write_file(dir / "pair.json", R"([{"id":"a","spatial":"ten.bin","ground_truth":10},
                                    {"id":"b","spatial":"fifteen.bin","ground_truth":20}])");
  const auto single = evaluate(load_manifest(dir / "single.json"), EvalSettings{});
  const auto pair = evaluate(load_manifest(dir / "pair.json"), EvalSettings{});
  fs::remove_all(dir);

  const bool single_ok = single.failures.empty() && single.per_video.size() == 1 &&
                         single.per_video[0].predicted == 9 && single.per_video[0].percent_error == 10.0 &&
                         single.overall.mae == 10.0 && single.overall.sigma_counts == 1.0;
  const bool pair_ok = pair.failures.empty() && pair.overall.videos == 2 &&
                       std::abs(pair.overall.mae - 12.5) <= 1e-12 &&
                       std::abs(pair.overall.sigma_counts - std::sqrt(12.5)) <= 1e-12;
  o.pass = single_ok && pair_ok;
  o.detail = fmt("single mae %.12g sigma %.12g; pair mae %.12g sigma %.12g", single.overall.mae,
                 single.overall.sigma_counts, pair.overall.mae, pair.overall.sigma_counts);
  o.record = {{"single", to_json(single)}, {"pair", to_json(pair)}};
  return o;
}

Outcome invariances() {
  Outcome o;
  int negation_same = 0, scaling_same = 0;
  Json counts = Json::array();
  for (int i = 0; i < 50; ++i) {
    SynthSpec spec;
    const int k = 4 + (i * 11) % 47;
    spec.cycles = k;
    spec.n_frames = 16 * k;
    spec.dim = 16;
    spec.shape = static_cast<WaveShape>(i % 3);
    spec.noise_snr_db = 5.0 + (i % 4) * 5.0;
    if (i % 5 == 0) spec.distractor = Distractor{0.5, 0.3};
    spec.seed = 9000 + static_cast<std::uint64_t>(i);
    const auto m = generate(spec).matrix;
    const int base = count_of(m);
    negation_same += count_of(scaled(m, -1.0)) == base;
    bool all = true;
    for (double c : {1e-3, 1.0, 1e3}) all = all && count_of(scaled(m, c)) == base;
    scaling_same += all;
    counts.push_back(base);
  }
  o.pass = negation_same == 50 && scaling_same == 50;
  o.detail = fmt("negation unchanged %d/50, scaling unchanged %d/50", negation_same, scaling_same);
  o.record = {{"negation", negation_same}, {"scaling", scaling_same}, {"counts", counts}};
  return o;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 60, oracle_equivalence},
      {2, "round trip and symmetry", 30, round_trip_and_symmetry},
      {3, "exact counts on clean fixtures", 60, exact_clean_counts},
      {4, "noise robustness with and without FMF", 300, noise_robustness},
      {5, "multi-stage vs single threshold", 120, multi_stage_vs_single},
      {6, "metric arithmetic", 60, metric_arithmetic},
      {8, "sign and amplitude invariance", 120, invariances},
  };

  using Clock = std::chrono::steady_clock;
  auto run_all = [&](bool print, bool& all_pass) {
    Json report = Json::object();
    for (const auto& c : criteria) {
      const auto t0 = Clock::now();
      Outcome out;
      try {
        out = c.run();
      } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("threw: ") + e.what();
      }
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      const bool pass = out.pass && secs <= c.budget_s;
      all_pass = all_pass && pass;
      if (print) {
        std::printf("%s criterion %d: %s: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    out.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
      }
      report[std::to_string(c.id)] = out.record;
    }
    return dump(report);
  };

  bool all_pass = true;
  const auto first = run_all(true, all_pass);
  bool ignored = true;
  const auto t0 = Clock::now();
  const auto second = run_all(false, ignored);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool same = first == second;
  all_pass = all_pass && same;
  std::printf("%s criterion 7: determinism: second full run %s (%zu bytes of JSON, %.2f s)\n", same ? "PASS" : "FAIL",
              same ? "byte-identical" : "differs", first.size(), secs);
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all_pass ? 0 : 1;
}
