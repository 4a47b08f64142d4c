#include "repcount/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <sstream>

#include "repcount/counter.hpp"
#include "repcount/eval.hpp"
#include "repcount/matrix_io.hpp"
#include "repcount/pca.hpp"
#include "repcount/report.hpp"
#include "repcount/spectral.hpp"
#include "repcount/synth.hpp"

namespace repcount {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string spatial;
  std::string temporal;
  std::string fusion = "auto";
  std::optional<int> alpha;
  std::string ladder;
  double beta = FmfConfig{}.significance_fraction;
  double high_band_start = FmfConfig{}.high_band_start_fraction;
  double gamma = PeakParams{}.min_prominence_fraction;
  Index min_separation = PeakParams{}.min_separation;
  bool no_fmf = false;
  std::string manifest;
  std::string alphas = "10,15,20,25,30,35";
  std::string format = "table";
  std::string out;
  std::string spec;
  std::uint64_t seed = 0;
  Index components = 1;
  unsigned jobs = 0;

  CLI::Option* seed_opt = nullptr;
};

void add_input_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--spatial", o.spatial, "Spatial-stream feature matrix (text or RPM1 binary)");
  cmd->add_option("--temporal", o.temporal, "Temporal-stream feature matrix (text or RPM1 binary)");
}

void add_filter_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--fusion", o.fusion,
                  "spatial | temporal | concat (default: spatial if --spatial is given, else temporal)")
      ->check(CLI::IsMember({"auto", "spatial", "temporal", "concat"}));
  cmd->add_option("--alpha", o.alpha, "Fixed threshold: keep-bins per side (overrides the ladder)");
  cmd->add_option("--ladder", o.ladder, "JSON threshold ladder [{\"max_band_count\":int|null,\"alpha\":int},...]");
  cmd->add_option("--beta", o.beta, "Significance fraction for the high-band count")->capture_default_str();
  cmd->add_option("--high-band-start", o.high_band_start, "High band start as a fraction of N")->capture_default_str();
  cmd->add_option("--gamma", o.gamma, "Peak prominence as a fraction of the p95-p5 range")->capture_default_str();
  cmd->add_option("--min-separation", o.min_separation, "Minimum frames between peaks")->capture_default_str();
  cmd->add_flag("--no-fmf", o.no_fmf, "Skip frequency filtering");
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "json | table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  cmd->add_option("--out", o.out, "Write output here instead of stdout");
}

FmfConfig resolve_fmf(const Options& o) {
  FmfConfig cfg;
  if (!o.ladder.empty()) cfg.ladder = ladder_from_json(Json::parse(read_file(o.ladder)));
  cfg.significance_fraction = o.beta;
  cfg.high_band_start_fraction = o.high_band_start;
  cfg.fixed_alpha = o.alpha;
  cfg.enabled = !o.no_fmf;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

PeakParams resolve_peaks(const Options& o) {
  PeakParams p{o.gamma, o.min_separation};
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

Fusion resolve_fusion(const Options& o) {
  if (o.fusion == "auto") return o.spatial.empty() && !o.temporal.empty() ? Fusion::temporal : Fusion::spatial;
  return *parse_fusion(o.fusion);
}

EvalSettings resolve_settings(const Options& o) { return {resolve_fmf(o), resolve_peaks(o), resolve_fusion(o)}; }

std::optional<FeatureMatrix> load_optional(const std::string& path) {
  if (path.empty()) return std::nullopt;
  try {
    return load_matrix(path);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

std::vector<int> parse_alphas(const std::string& csv) {
  std::vector<int> alphas;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      alphas.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--alphas expects comma-separated integers, got '" + item + "'");
    }
  }
  return alphas;
}

std::vector<LoadedEntry> manifest_entries(const Options& o) {
  if (o.manifest.empty()) throw UsageError("--manifest is required");
  return load_entries(load_manifest(o.manifest));
}

int cmd_count(const Options& o, std::ostream& out) {
  if (o.spatial.empty() && o.temporal.empty()) throw UsageError("count needs --spatial and/or --temporal");
  const auto settings = resolve_settings(o);
  const auto spatial = load_optional(o.spatial);
  const auto temporal = load_optional(o.temporal);
  const auto report = count_repetitions(spatial ? &*spatial : nullptr, temporal ? &*temporal : nullptr,
                                        settings.fmf, settings.peaks, settings.fusion);
  if (o.format == "json") {
    emit(o, dump(to_json(report)), out);
  } else {
    std::string text = "count: " + std::to_string(report.count) + "\npeaks:";
    for (Index p : report.peaks) text += " " + std::to_string(p);
    text += "\nalpha: " + std::to_string(report.trace.alpha) + "\nband_count: " +
            std::to_string(report.trace.band_count) + "\nkept_energy_fraction: " +
            fixed4(report.trace.kept_energy_fraction) + "\nstream: " + std::string(to_string(report.stream)) + "\n";
    emit(o, text, out);
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto settings = resolve_settings(o);
  const auto entries = manifest_entries(o);
  const auto report = evaluate(entries, settings, o.jobs);
  emit(o, o.format == "json" ? dump(to_json(report)) : format_eval_table(report), out);
  return report.failures.empty() ? kExitOk : kExitData;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto settings = resolve_settings(o);
  const auto alphas = parse_alphas(o.alphas);
  const auto entries = manifest_entries(o);
  const auto rows = sweep_thresholds(entries, alphas, settings, o.jobs);
  emit(o, o.format == "json" ? dump(to_json(rows, settings)) : format_sweep_table(rows), out);
  return kExitOk;
}

int cmd_ablate(const Options& o, std::ostream& out) {
  const auto settings = resolve_settings(o);
  const auto entries = manifest_entries(o);
  const auto cells = ablate_fmf(entries, settings, o.jobs);
  emit(o, o.format == "json" ? dump(to_json(cells, settings)) : format_ablation_table(cells), out);
  return kExitOk;
}

void write_fixture(const SynthSpec& spec, const fs::path& path, int* ground_truth) {
  const auto fixture = generate(spec);
  if (path.extension() == ".bin") {
    save_binary_matrix(fixture.matrix, path);
  } else {
    save_text_matrix(fixture.matrix, path);
  }
  Json sidecar;
  sidecar["spec"] = to_json(spec);
  sidecar["ground_truth"] = fixture.ground_truth;
  write_file(fs::path(path.string() + ".json"), sidecar.dump(2) + "\n");
  if (ground_truth) *ground_truth = fixture.ground_truth;
}

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.spec.empty() || o.out.empty()) throw UsageError("synth needs --spec and --out");
  Json doc;
  try {
    doc = Json::parse(read_file(o.spec));
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SpecInvalid, o.spec + ": " + e.what());
  }
  const bool override_seed = o.seed_opt && o.seed_opt->count();

  if (doc.is_object()) {
    auto spec = synth_spec_from_json(doc);
    if (override_seed) spec.seed = o.seed;
    int truth = 0;
    write_fixture(spec, o.out, &truth);
    out << "wrote " << o.out << " (ground_truth " << truth << ")\n";
    return kExitOk;
  }
  if (!doc.is_array()) throw Error(Errc::SpecInvalid, "spec must be an object or an array of fixtures");

  // Fixture set: [{"id", "dataset"?, "spatial": spec?, "temporal": spec?}] -> directory with manifest.json.
  const fs::path dir = o.out;
  fs::create_directories(dir);
  Json manifest = Json::array();
  for (const auto& item : doc) {
    const auto id = item.at("id").get<std::string>();
    Json entry;
    entry["id"] = id;
    int truth = 0;
    for (const char* stream : {"spatial", "temporal"}) {
      if (!item.contains(stream)) continue;
      auto spec = synth_spec_from_json(item[stream]);
      if (override_seed) spec.seed += o.seed;
      const std::string file = id + "_" + stream + ".bin";
      write_fixture(spec, dir / file, &truth);
      entry[stream] = file;
    }
    if (!entry.contains("spatial") && !entry.contains("temporal")) {
      throw Error(Errc::SpecInvalid, id + ": needs a spatial or temporal spec");
    }
    entry["ground_truth"] = truth;
    if (item.contains("dataset")) entry["dataset"] = item["dataset"];
    manifest.push_back(std::move(entry));
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << manifest.size() << " fixtures and " << (dir / "manifest.json").string() << "\n";
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
  if (o.spatial.empty() && o.temporal.empty()) throw UsageError("export-waveform needs --spatial and/or --temporal");
  const auto settings = resolve_settings(o);
  const auto spatial = load_optional(o.spatial);
  const auto temporal = load_optional(o.temporal);
  const auto matrix = working_matrix(spatial ? &*spatial : nullptr, temporal ? &*temporal : nullptr, settings.fusion);

  const auto components = leading_component_waveforms(matrix, std::max<Index>(1, o.components));
  const Waveform& raw = components.front();
  const auto spectrum = dft(raw);
  FmfTrace trace;
  VectorX<double> filtered = raw.samples();
  if (settings.fmf.enabled) {
    auto f = fmf(raw.samples(), settings.fmf);
    filtered = std::move(f.samples);
    trace = f.trace;
  }

  std::string text = "# alpha=" + std::to_string(trace.alpha) + " band_count=" + std::to_string(trace.band_count) +
                     " kept_energy_fraction=" + shortest_decimal(trace.kept_energy_fraction) + "\n";
  text += "# frame\traw\tfiltered\tmagnitude";
  for (std::size_t c = 1; c < components.size(); ++c) text += "\tpc" + std::to_string(c + 1);
  text += "\n";
  for (Index i = 0; i < raw.size(); ++i) {
    text += std::to_string(i) + "\t" + shortest_decimal(raw[i]) + "\t" + shortest_decimal(filtered[i]) + "\t" +
            shortest_decimal(std::abs(spectrum[i]));
    for (std::size_t c = 1; c < components.size(); ++c) text += "\t" + shortest_decimal(components[c][i]);
    text += "\n";
  }
  emit(o, text, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repetition counting from per-frame feature matrices", "repcount"};
  app.require_subcommand(1);
  Options o;

  auto* count = app.add_subcommand("count", "Count repetitions in one video");
  add_input_flags(count, o);
  add_filter_flags(count, o);
  add_output_flags(count, o);

  auto* eval = app.add_subcommand("eval", "Evaluate a manifest (MAE and sigma)");
  eval->add_option("--manifest", o.manifest, "JSON manifest")->required();
  add_filter_flags(eval, o);
  add_output_flags(eval, o);
  eval->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  auto* sweep = app.add_subcommand("sweep", "Fixed-threshold sweep plus the multi-stage row");
  sweep->add_option("--manifest", o.manifest, "JSON manifest")->required();
  sweep->add_option("--alphas", o.alphas, "Comma-separated fixed thresholds")->capture_default_str();
  add_filter_flags(sweep, o);
  add_output_flags(sweep, o);
  sweep->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  auto* ablate = app.add_subcommand("ablate", "With/without FMF for each stream");
  ablate->add_option("--manifest", o.manifest, "JSON manifest")->required();
  add_filter_flags(ablate, o);
  add_output_flags(ablate, o);
  ablate->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");

  auto* synth = app.add_subcommand("synth", "Generate synthetic fixtures");
  synth->add_option("--spec", o.spec, "SynthSpec JSON (object, or array of fixtures)")->required();
  synth->add_option("--out", o.out, "Matrix file (.bin = binary) or, for arrays, output directory")->required();
  o.seed_opt = synth->add_option("--seed", o.seed, "Override the seed (added to each seed for arrays)");

  auto* exporter = app.add_subcommand("export-waveform", "Dump raw/filtered waveform and spectrum as columns");
  add_input_flags(exporter, o);
  add_filter_flags(exporter, o);
  exporter->add_option("--out", o.out, "Write output here instead of stdout");
  exporter->add_option("--components", o.components, "Also emit principal components 2..K")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (count->parsed()) return cmd_count(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (ablate->parsed()) return cmd_ablate(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (exporter->parsed()) return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace repcount
