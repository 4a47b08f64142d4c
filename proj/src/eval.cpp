#include "repcount/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "repcount/matrix_io.hpp"

namespace repcount {

void ManifestEntry::validate() const {
  if (id.empty()) throw Error(Errc::ManifestInvalid, "entry without id");
  if (!spatial_path && !temporal_path) throw Error(Errc::ManifestInvalid, id + ": no feature path");
  if (ground_truth < 1) throw Error(Errc::ManifestInvalid, id + ": ground_truth must be >= 1");
}

std::vector<ManifestEntry> parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ManifestInvalid, e.what());
  }
  if (!doc.is_array()) throw Error(Errc::ManifestInvalid, "manifest must be a JSON array");

  auto resolve = [&](const nlohmann::json& v) -> std::optional<std::filesystem::path> {
    if (v.is_null()) return std::nullopt;
    if (!v.is_string()) throw Error(Errc::ManifestInvalid, "paths must be strings");
    std::filesystem::path p = v.get<std::string>();
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };

  std::vector<ManifestEntry> out;
  for (const auto& item : doc) {
    if (!item.is_object()) throw Error(Errc::ManifestInvalid, "entries must be objects");
    ManifestEntry e;
    try {
      e.id = item.at("id").get<std::string>();
      e.ground_truth = item.at("ground_truth").get<int>();
      e.spatial_path = resolve(item.value("spatial", nlohmann::json()));
      e.temporal_path = resolve(item.value("temporal", nlohmann::json()));
      if (item.contains("dataset") && !item["dataset"].is_null()) e.dataset = item["dataset"].get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::ManifestInvalid, ex.what());
    }
    e.validate();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

std::vector<LoadedEntry> load_entries(std::span<const ManifestEntry> manifest) {
  std::vector<LoadedEntry> out;
  out.reserve(manifest.size());
  for (const auto& e : manifest) {
    LoadedEntry loaded{e, std::nullopt, std::nullopt, std::nullopt};
    try {
      if (e.spatial_path) loaded.spatial = load_matrix(*e.spatial_path);
      if (e.temporal_path) loaded.temporal = load_matrix(*e.temporal_path);
    } catch (const Error& err) {
      loaded.load_error = err;
    }
    out.push_back(std::move(loaded));
  }
  return out;
}

Metrics compute_metrics(std::span<const VideoResult> results) {
  Metrics m;
  m.videos = results.size();
  if (results.empty()) return m;
  const auto n = static_cast<double>(results.size());
  double sum_pct = 0.0;
  double sum_sq_diff = 0.0;
  for (const auto& r : results) {
    sum_pct += r.percent_error;
    const double diff = static_cast<double>(r.ground_truth - r.predicted);
    sum_sq_diff += diff * diff;
  }
  m.mae = sum_pct / n;
  m.sigma_counts = std::sqrt(sum_sq_diff / n);
  double var = 0.0;
  for (const auto& r : results) var += (r.percent_error - m.mae) * (r.percent_error - m.mae);
  m.sigma_percent = std::sqrt(var / n);
  return m;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

}  // namespace

EvalReport evaluate(std::span<const LoadedEntry> entries, const EvalSettings& settings, unsigned threads) {
  settings.fmf.validate();
  settings.peaks.validate();

  struct Outcome {
    std::optional<VideoResult> result;
    std::optional<EntryFailure> failure;
  };
  std::vector<Outcome> outcomes(entries.size());

  parallel_for(entries.size(), threads, [&](std::size_t i) {
    const auto& item = entries[i];
    if (item.load_error) {
      outcomes[i].failure = EntryFailure{item.entry.id, item.load_error->code(), item.load_error->what()};
      return;
    }
    try {
      auto report = count_repetitions(item.spatial ? &*item.spatial : nullptr,
                                      item.temporal ? &*item.temporal : nullptr, settings.fmf, settings.peaks,
                                      settings.fusion);
      VideoResult r;
      r.id = item.entry.id;
      r.dataset = item.entry.dataset;
      r.ground_truth = item.entry.ground_truth;
      r.predicted = report.count;
      r.percent_error = std::abs(static_cast<double>(r.ground_truth - r.predicted)) /
                        static_cast<double>(r.ground_truth) * 100.0;
      r.report = std::move(report);
      outcomes[i].result = std::move(r);
    } catch (const Error& err) {
      outcomes[i].failure = EntryFailure{item.entry.id, err.code(), err.what()};
    }
  });

  EvalReport report;
  report.settings = settings;
  for (auto& o : outcomes) {
    if (o.result) report.per_video.push_back(std::move(*o.result));
    if (o.failure) report.failures.push_back(std::move(*o.failure));
  }
  report.overall = compute_metrics(report.per_video);

  std::map<std::string, std::vector<VideoResult>> groups;
  for (const auto& r : report.per_video) groups[r.dataset.value_or("")].push_back(r);
  for (const auto& [name, members] : groups) report.per_dataset[name] = compute_metrics(members);
  if (!report.per_dataset.empty()) {
    auto& mean = report.overall_mean_of_datasets;
    for (const auto& [name, m] : report.per_dataset) {
      mean.videos += m.videos;
      mean.mae += m.mae;
      mean.sigma_counts += m.sigma_counts;
      mean.sigma_percent += m.sigma_percent;
    }
    const auto groups_n = static_cast<double>(report.per_dataset.size());
    mean.mae /= groups_n;
    mean.sigma_counts /= groups_n;
    mean.sigma_percent /= groups_n;
  }
  return report;
}

EvalReport evaluate(std::span<const ManifestEntry> manifest, const EvalSettings& settings, unsigned threads) {
  const auto loaded = load_entries(manifest);
  return evaluate(loaded, settings, threads);
}

std::string SweepRow::label() const { return alpha ? std::to_string(*alpha) : std::string("multi-stage"); }

std::vector<SweepRow> sweep_thresholds(std::span<const LoadedEntry> entries, std::span<const int> alphas,
                                       const EvalSettings& settings, unsigned threads) {
  std::vector<SweepRow> rows;
  for (int alpha : alphas) {
    EvalSettings fixed = settings;
    fixed.fmf.fixed_alpha = alpha;
    fixed.fmf.enabled = true;
    const auto report = evaluate(entries, fixed, threads);
    rows.push_back({alpha, report.overall, report.failures.size()});
  }
  EvalSettings multi = settings;
  multi.fmf.fixed_alpha.reset();
  multi.fmf.enabled = true;
  const auto report = evaluate(entries, multi, threads);
  rows.push_back({std::nullopt, report.overall, report.failures.size()});
  return rows;
}

std::vector<AblationCell> ablate_fmf(std::span<const LoadedEntry> entries, const EvalSettings& settings,
                                     unsigned threads) {
  std::vector<AblationCell> cells;
  for (bool on : {true, false}) {
    for (Fusion stream : {Fusion::spatial, Fusion::temporal, Fusion::concat}) {
      EvalSettings s = settings;
      s.fmf.enabled = on;
      s.fusion = stream;
      auto report = evaluate(entries, s, threads);
      cells.push_back({stream, on, report.overall, report.failures.size(), std::move(report.failures)});
    }
  }
  return cells;
}

}  // namespace repcount
