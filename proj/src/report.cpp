#include "repcount/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace repcount {

namespace {

template <typename Fn>
auto guarded(Errc code, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw Error(code, e.what());
  }
}

std::string pad(std::string s, std::size_t width, bool left_align = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left_align ? s + fill : fill + s;
}

std::string mae_sigma(const Metrics& m) { return fixed4(m.mae) + " +- " + fixed4(m.sigma_counts); }

}  // namespace

Json to_json(const LadderStage& stage) {
  Json j;
  j["max_band_count"] = stage.max_band_count ? Json(*stage.max_band_count) : Json(nullptr);
  j["alpha"] = stage.alpha;
  return j;
}

Json to_json(const std::vector<LadderStage>& ladder) {
  Json j = Json::array();
  for (const auto& s : ladder) j.push_back(to_json(s));
  return j;
}

Json to_json(const FmfConfig& cfg) {
  Json j;
  j["enabled"] = cfg.enabled;
  j["ladder"] = to_json(cfg.ladder);
  j["significance_fraction"] = cfg.significance_fraction;
  j["high_band_start_fraction"] = cfg.high_band_start_fraction;
  j["fixed_alpha"] = cfg.fixed_alpha ? Json(*cfg.fixed_alpha) : Json(nullptr);
  return j;
}

Json to_json(const PeakParams& params) {
  Json j;
  j["min_prominence_fraction"] = params.min_prominence_fraction;
  j["min_separation"] = params.min_separation;
  return j;
}

Json to_json(const FmfTrace& trace) {
  Json j;
  j["alpha"] = trace.alpha;
  j["band_count"] = trace.band_count;
  j["kept_energy_fraction"] = trace.kept_energy_fraction;
  return j;
}

Json to_json(const CountReport& report) {
  Json j;
  j["count"] = report.count;
  j["peaks"] = report.peaks;
  j["alpha"] = report.trace.alpha;
  j["band_count"] = report.trace.band_count;
  j["kept_energy_fraction"] = report.trace.kept_energy_fraction;
  j["stream"] = std::string(to_string(report.stream));
  return j;
}

Json to_json(const SynthSpec& spec) {
  Json j;
  j["n_frames"] = spec.n_frames;
  j["dim"] = spec.dim;
  j["cycles"] = spec.cycles;
  j["shape"] = std::string(to_string(spec.shape));
  j["amplitude_drift"] = spec.amplitude_drift;
  j["frequency_drift"] = spec.frequency_drift;
  j["noise_snr_db"] = spec.noise_snr_db ? Json(*spec.noise_snr_db) : Json(nullptr);
  if (spec.distractor) {
    j["distractor"] = {{"period_fraction", spec.distractor->period_fraction},
                       {"relative_amplitude", spec.distractor->relative_amplitude}};
  } else {
    j["distractor"] = nullptr;
  }
  j["seed"] = spec.seed;
  return j;
}

Json to_json(const Metrics& m) {
  Json j;
  j["videos"] = m.videos;
  j["mae"] = m.mae;
  j["sigma_counts"] = m.sigma_counts;
  j["sigma_percent"] = m.sigma_percent;
  return j;
}

Json to_json(const EvalSettings& settings) {
  Json j;
  j["fusion"] = std::string(to_string(settings.fusion));
  j["fmf"] = to_json(settings.fmf);
  j["peaks"] = to_json(settings.peaks);
  return j;
}

Json to_json(const EvalReport& report) {
  Json j;
  j["config"] = to_json(report.settings);
  Json videos = Json::array();
  for (const auto& r : report.per_video) {
    Json v;
    v["id"] = r.id;
    v["dataset"] = r.dataset ? Json(*r.dataset) : Json(nullptr);
    v["ground_truth"] = r.ground_truth;
    v["predicted"] = r.predicted;
    v["difference"] = r.ground_truth - r.predicted;
    v["percent_error"] = r.percent_error;
    v["report"] = to_json(r.report);
    videos.push_back(std::move(v));
  }
  j["per_video"] = std::move(videos);
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"id", f.id}, {"error", std::string(to_string(f.code))}, {"message", f.message}});
  }
  j["failures"] = std::move(failures);
  j["overall_pooled"] = to_json(report.overall);
  Json groups = Json::object();
  for (const auto& [name, m] : report.per_dataset) groups[name] = to_json(m);
  j["per_dataset"] = std::move(groups);
  j["overall_mean_of_datasets"] = to_json(report.overall_mean_of_datasets);
  return j;
}

Json to_json(const std::vector<SweepRow>& rows, const EvalSettings& settings) {
  Json j;
  j["config"] = to_json(settings);
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["threshold"] = r.label();
    row["alpha"] = r.alpha ? Json(*r.alpha) : Json(nullptr);
    row["metrics"] = to_json(r.metrics);
    row["failures"] = r.failures;
    out.push_back(std::move(row));
  }
  j["rows"] = std::move(out);
  return j;
}

Json to_json(const std::vector<AblationCell>& cells, const EvalSettings& settings) {
  Json j;
  j["config"] = to_json(settings);
  Json out = Json::array();
  for (const auto& c : cells) {
    Json cell;
    cell["stream"] = std::string(to_string(c.stream));
    cell["fmf"] = c.fmf;
    cell["metrics"] = to_json(c.metrics);
    cell["failures"] = c.failures;
    Json details = Json::array();
    for (const auto& f : c.failure_details) {
      details.push_back({{"id", f.id}, {"error", std::string(to_string(f.code))}});
    }
    cell["failure_details"] = std::move(details);
    out.push_back(std::move(cell));
  }
  j["cells"] = std::move(out);
  return j;
}

std::vector<LadderStage> ladder_from_json(const Json& j) {
  return guarded(Errc::InvalidConfig, [&] {
    const Json& arr = j.is_object() ? j.at("ladder") : j;
    if (!arr.is_array()) throw Error(Errc::InvalidConfig, "ladder must be an array");
    std::vector<LadderStage> ladder;
    for (const auto& item : arr) {
      LadderStage s;
      const auto& bound = item.at("max_band_count");
      if (!bound.is_null()) s.max_band_count = bound.get<int>();
      s.alpha = item.at("alpha").get<int>();
      ladder.push_back(s);
    }
    return ladder;
  });
}

FmfConfig fmf_config_from_json(const Json& j) {
  return guarded(Errc::InvalidConfig, [&] {
    FmfConfig cfg;
    if (j.contains("ladder")) cfg.ladder = ladder_from_json(j.at("ladder"));
    cfg.significance_fraction = j.value("significance_fraction", cfg.significance_fraction);
    cfg.high_band_start_fraction = j.value("high_band_start_fraction", cfg.high_band_start_fraction);
    if (j.contains("fixed_alpha") && !j["fixed_alpha"].is_null()) cfg.fixed_alpha = j["fixed_alpha"].get<int>();
    cfg.enabled = j.value("enabled", cfg.enabled);
    cfg.validate();
    return cfg;
  });
}

PeakParams peak_params_from_json(const Json& j) {
  return guarded(Errc::InvalidConfig, [&] {
    PeakParams p;
    p.min_prominence_fraction = j.value("min_prominence_fraction", p.min_prominence_fraction);
    p.min_separation = j.value("min_separation", p.min_separation);
    p.validate();
    return p;
  });
}

SynthSpec synth_spec_from_json(const Json& j) {
  return guarded(Errc::SpecInvalid, [&] {
    SynthSpec s;
    s.n_frames = j.value("n_frames", s.n_frames);
    s.dim = j.value("dim", s.dim);
    s.cycles = j.value("cycles", s.cycles);
    if (j.contains("shape")) {
      auto shape = parse_wave_shape(j["shape"].get<std::string>());
      if (!shape) throw Error(Errc::SpecInvalid, "unknown shape " + j["shape"].get<std::string>());
      s.shape = *shape;
    }
    s.amplitude_drift = j.value("amplitude_drift", 0.0);
    s.frequency_drift = j.value("frequency_drift", 0.0);
    if (j.contains("noise_snr_db")) {
      const auto& snr = j["noise_snr_db"];
      if (snr.is_number()) {
        s.noise_snr_db = snr.get<double>();
      } else if (snr.is_string() && (snr.get<std::string>() == "inf" || snr.get<std::string>() == "infinity")) {
        s.noise_snr_db.reset();
      } else if (!snr.is_null()) {
        throw Error(Errc::SpecInvalid, "noise_snr_db must be a number, null or \"inf\"");
      }
    }
    if (j.contains("distractor") && !j["distractor"].is_null()) {
      const auto& d = j["distractor"];
      s.distractor = Distractor{d.at("period_fraction").get<double>(), d.at("relative_amplitude").get<double>()};
    }
    s.seed = j.value("seed", std::uint64_t{0});
    s.validate();
    return s;
  });
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string format_eval_table(const EvalReport& report) {
  std::string out;
  out += pad("id", 24, true) + pad("G", 6) + pad("R", 6) + pad("G-R", 6) + pad("error%", 12) + "\n";
  for (const auto& r : report.per_video) {
    out += pad(r.id, 24, true) + pad(std::to_string(r.ground_truth), 6) + pad(std::to_string(r.predicted), 6) +
           pad(std::to_string(r.ground_truth - r.predicted), 6) + pad(fixed4(r.percent_error), 12) + "\n";
  }
  for (const auto& f : report.failures) {
    out += pad(f.id, 24, true) + "  FAILED " + std::string(to_string(f.code)) + "\n";
  }
  out += "\n";
  out += pad("group", 24, true) + pad("videos", 8) + pad("MAE", 12) + pad("sigma_counts", 14) +
         pad("sigma_percent", 15) + "\n";
  auto line = [&](const std::string& name, const Metrics& m) {
    out += pad(name, 24, true) + pad(std::to_string(m.videos), 8) + pad(fixed4(m.mae), 12) +
           pad(fixed4(m.sigma_counts), 14) + pad(fixed4(m.sigma_percent), 15) + "\n";
  };
  if (report.per_dataset.size() > 1 || (report.per_dataset.size() == 1 && !report.per_dataset.begin()->first.empty())) {
    for (const auto& [name, m] : report.per_dataset) line(name.empty() ? "(unlabeled)" : name, m);
    line("overall (mean of groups)", report.overall_mean_of_datasets);
  }
  line("overall (pooled)", report.overall);
  if (!report.failures.empty()) out += "failed entries: " + std::to_string(report.failures.size()) + "\n";
  return out;
}

std::string format_sweep_table(const std::vector<SweepRow>& rows) {
  std::string out = pad("Threshold", 14, true) + pad("MAE +- sigma", 24) + pad("failed", 8) + "\n";
  for (const auto& r : rows) {
    out += pad(r.label(), 14, true) + pad(mae_sigma(r.metrics), 24) + pad(std::to_string(r.failures), 8) + "\n";
  }
  return out;
}

std::string format_ablation_table(const std::vector<AblationCell>& cells) {
  std::string out = pad("FMF", 10, true);
  for (Fusion f : {Fusion::spatial, Fusion::temporal, Fusion::concat}) out += pad(std::string(to_string(f)), 32);
  out += "\n";
  for (bool on : {true, false}) {
    out += pad(on ? "with" : "without", 10, true);
    for (Fusion f : {Fusion::spatial, Fusion::temporal, Fusion::concat}) {
      std::string cell = "-";
      for (const auto& c : cells) {
        if (c.fmf == on && c.stream == f) {
          cell = mae_sigma(c.metrics);
          if (c.failures) cell += " (" + std::to_string(c.failures) + " failed)";
        }
      }
      out += pad(cell, 32);
    }
    out += "\n";
  }
  return out;
}

}  // namespace repcount
