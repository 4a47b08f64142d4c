#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "repcount/eval.hpp"
#include "repcount/matrix_io.hpp"
#include "repcount/report.hpp"
#include "repcount/synth.hpp"

using namespace repcount;
namespace fs = std::filesystem;

namespace {

FeatureMatrix fixture(double cycles, std::uint64_t seed, Index dim = 8) {
  SynthSpec spec;
  spec.cycles = cycles;
  spec.n_frames = static_cast<Index>(20 * cycles);
  spec.dim = dim;
  spec.seed = seed;
  return generate(spec).matrix;
}

// A clean fixture with `cycles` repetitions labelled as `truth`.
LoadedEntry entry(std::string id, int cycles, int truth, std::optional<std::string> dataset = std::nullopt) {
  LoadedEntry e;
  e.entry.id = std::move(id);
  e.entry.ground_truth = truth;
  e.entry.spatial_path = "memory";
  e.entry.dataset = std::move(dataset);
  e.spatial = fixture(cycles, static_cast<std::uint64_t>(cycles));
  e.temporal = fixture(cycles, static_cast<std::uint64_t>(cycles) + 100, 5);
  return e;
}

VideoResult result(int truth, int predicted) {
  VideoResult r;
  r.ground_truth = truth;
  r.predicted = predicted;
  r.percent_error = std::abs(static_cast<double>(truth - predicted)) / truth * 100.0;
  return r;
}

}  // namespace

TEST(Metrics, SingleEntryHandArithmetic) {
  const std::vector<LoadedEntry> manifest = {entry("a", 9, 10)};
  const auto report = evaluate(manifest, EvalSettings{});
  ASSERT_EQ(report.per_video.size(), 1u);
  EXPECT_EQ(report.per_video[0].predicted, 9);
  EXPECT_EQ(report.per_video[0].percent_error, 10.0);
  EXPECT_EQ(report.overall.mae, 10.0);
  EXPECT_EQ(report.overall.sigma_counts, 1.0);
  EXPECT_EQ(report.overall.sigma_percent, 0.0);
}

TEST(Metrics, TwoEntryHandArithmetic) {
  const std::vector<LoadedEntry> manifest = {entry("a", 10, 10), entry("b", 15, 20)};
  const auto m = evaluate(manifest, EvalSettings{}).overall;
  EXPECT_EQ(m.videos, 2u);
  EXPECT_NEAR(m.mae, 12.5, 1e-12);
  EXPECT_NEAR(m.sigma_counts, std::sqrt(12.5), 1e-12);
  EXPECT_NEAR(m.sigma_percent, 12.5, 1e-12);
}

TEST(Metrics, PerfectPredictionsAreZero) {
  const std::vector<VideoResult> rs = {result(4, 4), result(17, 17), result(50, 50)};
  const auto m = compute_metrics(rs);
  EXPECT_EQ(m.mae, 0.0);
  EXPECT_EQ(m.sigma_counts, 0.0);
  EXPECT_EQ(m.sigma_percent, 0.0);
  EXPECT_EQ(compute_metrics({}).videos, 0u);
}

TEST(Metrics, PermutationInvariantAndPerfectVideosDilute) {
  std::vector<VideoResult> rs = {result(10, 9), result(20, 15), result(8, 8), result(30, 33), result(5, 3)};
  const auto base = compute_metrics(rs);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(rs.begin(), rs.end(), rng);
    const auto m = compute_metrics(rs);
    EXPECT_NEAR(m.mae, base.mae, 1e-12);
    EXPECT_NEAR(m.sigma_counts, base.sigma_counts, 1e-12);
    EXPECT_NEAR(m.sigma_percent, base.sigma_percent, 1e-12);
  }
  std::erase_if(rs, [](const VideoResult& r) { return r.ground_truth == r.predicted; });
  EXPECT_GE(compute_metrics(rs).mae, base.mae);
}

TEST(Evaluate, PerDatasetAndMeanOfDatasets) {
  const std::vector<LoadedEntry> manifest = {entry("a", 9, 10, "yt"), entry("b", 8, 8, "yt"),
                                             entry("c", 15, 20, "quva")};
  const auto report = evaluate(manifest, EvalSettings{});
  ASSERT_EQ(report.per_dataset.size(), 2u);
  EXPECT_NEAR(report.per_dataset.at("yt").mae, 5.0, 1e-12);
  EXPECT_NEAR(report.per_dataset.at("quva").mae, 25.0, 1e-12);
  EXPECT_NEAR(report.overall.mae, 35.0 / 3.0, 1e-12);
  EXPECT_NEAR(report.overall_mean_of_datasets.mae, 15.0, 1e-12);
}

TEST(Evaluate, FailuresAreListed) {
  std::vector<LoadedEntry> manifest = {entry("ok", 8, 8), entry("broken", 8, 8)};
  manifest[1].spatial.reset();
  manifest[1].temporal.reset();
  manifest[1].load_error = Error(Errc::MissingFile, "gone.bin");
  const auto report = evaluate(manifest, EvalSettings{});
  EXPECT_EQ(report.per_video.size(), 1u);
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].id, "broken");
  EXPECT_EQ(report.failures[0].code, Errc::MissingFile);
  EXPECT_EQ(report.overall.videos, 1u);
}

TEST(Evaluate, SerialAndParallelAgree) {
  std::vector<LoadedEntry> manifest;
  for (int k = 4; k < 20; ++k) manifest.push_back(entry("v" + std::to_string(k), k, k + k % 3, k % 2 ? "odd" : "even"));
  const auto serial = dump(to_json(evaluate(manifest, EvalSettings{}, 1)));
  EXPECT_EQ(serial, dump(to_json(evaluate(manifest, EvalSettings{}, 4))));
  EXPECT_EQ(serial, dump(to_json(evaluate(manifest, EvalSettings{}, 0))));
}

TEST(Sweep, RowsInOrderWithMultiStageLast) {
  const std::vector<LoadedEntry> manifest = {entry("a", 5, 5), entry("b", 12, 12)};
  const std::vector<int> alphas = {10, 15, 20, 25, 30, 35};
  const auto rows = sweep_thresholds(manifest, alphas, EvalSettings{});
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 0; i < alphas.size(); ++i) EXPECT_EQ(rows[i].alpha, alphas[i]);
  EXPECT_FALSE(rows.back().alpha.has_value());
  EXPECT_EQ(rows.back().label(), "multi-stage");
  EXPECT_EQ(rows.back().metrics.mae, 0.0);

  const auto only_multi = sweep_thresholds(manifest, {}, EvalSettings{});
  ASSERT_EQ(only_multi.size(), 1u);
  EXPECT_EQ(only_multi[0].metrics.mae, 0.0);
}

TEST(Ablation, SixCellsAndMissingStreams) {
  std::vector<LoadedEntry> manifest = {entry("a", 8, 8), entry("b", 6, 6)};
  manifest[1].temporal.reset();
  const auto cells = ablate_fmf(manifest, EvalSettings{});
  ASSERT_EQ(cells.size(), 6u);
  const Fusion order[] = {Fusion::spatial, Fusion::temporal, Fusion::concat};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(cells[i].fmf, i < 3);
    EXPECT_EQ(cells[i].stream, order[i % 3]);
    // Noiseless fixtures count exactly with and without filtering.
    EXPECT_EQ(cells[i].metrics.mae, 0.0);
  }
  EXPECT_EQ(cells[0].failures, 0u);
  ASSERT_EQ(cells[1].failures, 1u);
  EXPECT_EQ(cells[1].failure_details[0].code, Errc::MissingStream);
  EXPECT_EQ(cells[2].failures, 1u);
}

TEST(Manifest, ParsesAndResolvesPaths) {
  const auto m = parse_manifest(R"([{"id":"a","spatial":"a.bin","ground_truth":7,"dataset":"yt"},
                                    {"id":"b","temporal":"/abs/b.bin","ground_truth":4}])",
                                "/data");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(*m[0].spatial_path, fs::path("/data/a.bin"));
  EXPECT_FALSE(m[0].temporal_path.has_value());
  EXPECT_EQ(m[0].dataset, "yt");
  EXPECT_EQ(*m[1].temporal_path, fs::path("/abs/b.bin"));
  EXPECT_EQ(m[1].ground_truth, 4);
}

TEST(Manifest, RejectsMalformedDocuments) {
  for (const char* text : {"{", "{}", "[1]", R"([{"spatial":"a.bin","ground_truth":3}])",
                           R"([{"id":"a","ground_truth":3}])", R"([{"id":"a","spatial":"a.bin","ground_truth":0}])",
                           R"([{"id":"a","spatial":"a.bin","ground_truth":"x"}])", R"([{"id":"a","spatial":5,"ground_truth":3}])"}) {
    try {
      parse_manifest(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ManifestInvalid) << text;
    }
  }
}

TEST(Manifest, LoadFailuresSurfaceThroughEvaluate) {
  const fs::path dir = fs::temp_directory_path() / "repcount_eval_load";
  fs::create_directories(dir);
  save_binary_matrix(fixture(6, 1), dir / "good.bin");
  write_file(dir / "bad.bin", "RPM1 not really");
  write_file(dir / "manifest.json", R"([{"id":"good","spatial":"good.bin","ground_truth":6},
                                       {"id":"bad","spatial":"bad.bin","ground_truth":6},
                                       {"id":"missing","spatial":"nope.bin","ground_truth":6}])");
  const auto report = evaluate(load_manifest(dir / "manifest.json"), EvalSettings{});
  fs::remove_all(dir);
  ASSERT_EQ(report.per_video.size(), 1u);
  EXPECT_EQ(report.per_video[0].predicted, 6);
  ASSERT_EQ(report.failures.size(), 2u);
  EXPECT_EQ(report.failures[0].id, "bad");
  EXPECT_EQ(report.failures[1].code, Errc::MissingFile);
}
