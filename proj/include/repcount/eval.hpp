#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "repcount/counter.hpp"
#include "repcount/error.hpp"
#include "repcount/fmf_config.hpp"
#include "repcount/peaks.hpp"

namespace repcount {

struct ManifestEntry {
  std::string id;
  std::optional<std::filesystem::path> spatial_path;
  std::optional<std::filesystem::path> temporal_path;
  int ground_truth = 1;
  /// Optional grouping label (e.g. a dataset name) for per-group summaries.
  std::optional<std::string> dataset;

  void validate() const;
};

/// Parses a JSON manifest. Relative paths resolve against `base_dir`.
std::vector<ManifestEntry> parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir = {});
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

/// A manifest entry with its matrices read into memory.
struct LoadedEntry {
  ManifestEntry entry;
  std::optional<FeatureMatrix> spatial;
  std::optional<FeatureMatrix> temporal;
  /// Set when a referenced file could not be loaded.
  std::optional<Error> load_error;
};

std::vector<LoadedEntry> load_entries(std::span<const ManifestEntry> manifest);

struct VideoResult {
  std::string id;
  std::optional<std::string> dataset;
  int ground_truth = 0;
  int predicted = 0;
  double percent_error = 0.0;
  CountReport report;
};

struct EntryFailure {
  std::string id;
  Errc code;
  std::string message;
};

/// MAE is in percent. sigma_counts = sqrt(mean((G - R)^2)); sigma_percent is
/// the population standard deviation of the per-video percent errors.
struct Metrics {
  std::size_t videos = 0;
  double mae = 0.0;
  double sigma_counts = 0.0;
  double sigma_percent = 0.0;
};

Metrics compute_metrics(std::span<const VideoResult> results);

struct EvalSettings {
  FmfConfig fmf;
  PeakParams peaks;
  Fusion fusion = Fusion::spatial;
};

struct EvalReport {
  EvalSettings settings;
  std::vector<VideoResult> per_video;
  std::vector<EntryFailure> failures;
  /// Pooled over every successful video.
  Metrics overall;
  /// Per dataset label; entries without one are grouped under "".
  std::map<std::string, Metrics> per_dataset;
  /// Unweighted mean of the per-dataset MAE and sigma values.
  Metrics overall_mean_of_datasets;
};

/// Counts every entry; entries that fail are listed in `failures`, never dropped silently.
/// Entries run in parallel when `threads` != 1 (0 picks the hardware concurrency);
/// results are always in manifest order.
EvalReport evaluate(std::span<const LoadedEntry> entries, const EvalSettings& settings, unsigned threads = 0);
EvalReport evaluate(std::span<const ManifestEntry> manifest, const EvalSettings& settings, unsigned threads = 0);

struct SweepRow {
  /// Empty for the multi-stage row.
  std::optional<int> alpha;
  Metrics metrics;
  std::size_t failures = 0;

  std::string label() const;
};

/// One fixed-alpha run per entry of `alphas` (input order), then the multi-stage run last.
std::vector<SweepRow> sweep_thresholds(std::span<const LoadedEntry> entries, std::span<const int> alphas,
                                       const EvalSettings& settings, unsigned threads = 0);

struct AblationCell {
  Fusion stream = Fusion::spatial;
  bool fmf = true;
  Metrics metrics;
  std::size_t failures = 0;
  std::vector<EntryFailure> failure_details;
};

/// Six runs: FMF on then off, each over spatial, temporal and concat.
std::vector<AblationCell> ablate_fmf(std::span<const LoadedEntry> entries, const EvalSettings& settings,
                                     unsigned threads = 0);

}  // namespace repcount
