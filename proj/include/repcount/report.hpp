#pragma once

// JSON and plain-text renderings of configs and results. JSON keys come out
// in a fixed order; tables use 4 fractional digits.

#include <string>
#include <vector>

#include <json.hpp>

#include "repcount/counter.hpp"
#include "repcount/eval.hpp"
#include "repcount/fmf_config.hpp"
#include "repcount/peaks.hpp"
#include "repcount/synth.hpp"

namespace repcount {

using Json = nlohmann::ordered_json;

Json to_json(const LadderStage& stage);
Json to_json(const std::vector<LadderStage>& ladder);
Json to_json(const FmfConfig& cfg);
Json to_json(const PeakParams& params);
Json to_json(const FmfTrace& trace);
Json to_json(const CountReport& report);
Json to_json(const SynthSpec& spec);
Json to_json(const Metrics& m);
Json to_json(const EvalSettings& settings);
Json to_json(const EvalReport& report);
Json to_json(const std::vector<SweepRow>& rows, const EvalSettings& settings);
Json to_json(const std::vector<AblationCell>& cells, const EvalSettings& settings);

/// Accepts either a bare array of stages or an object with a "ladder" array.
std::vector<LadderStage> ladder_from_json(const Json& j);
FmfConfig fmf_config_from_json(const Json& j);
PeakParams peak_params_from_json(const Json& j);
/// "noise_snr_db" may be a number, null, or "inf"; a missing distractor means none.
SynthSpec synth_spec_from_json(const Json& j);

/// Compact JSON followed by a newline.
std::string dump(const Json& j);

/// "12.3456" style fixed formatting.
std::string fixed4(double x);

/// Per-video dump (id, G, R, G-R, percent error) followed by pooled and per-dataset summaries.
std::string format_eval_table(const EvalReport& report);
/// Threshold | MAE +- sigma rows.
std::string format_sweep_table(const std::vector<SweepRow>& rows);
/// Two blocks (with FMF, without FMF) by three stream columns.
std::string format_ablation_table(const std::vector<AblationCell>& cells);

}  // namespace repcount
