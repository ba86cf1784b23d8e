#include "ocular/payload.hpp"

#include <cmath>

#include "ocular/error.hpp"

namespace ocular::payload {

const std::string_view kDisclaimer =
    "Screening estimate only, not a diagnosis. Results depend on camera, lighting and capture quality. "
    "See an eye-care professional about any symptom or concern.";

std::string to_string(Module m) {
  switch (m) {
    case Module::Redness: return "redness";
    case Module::Blink: return "blink";
    case Module::Pupil: return "pupil";
    case Module::Color: return "color";
    case Module::Lesion: return "lesion";
  }
  return "redness";
}

Module parse_module(std::string_view text) {
  for (Module m : kAllModules)
    if (to_string(m) == text) return m;
  throw Error(ErrorCode::InvalidArgument, "module must be one of redness, blink, pupil, color, lesion",
              std::string(text));
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json series_json(const std::vector<double>& values) {
  json a = json::array();
  for (double v : values) a.push_back(finite_or_null(v));
  return a;
}

}  // namespace

json to_json(const redness::RednessResult& r) {
  return json{
      {"module", "redness"},
      {"redness_score", r.score},
      {"score_lo", r.score_lo},
      {"score_hi", r.score_hi},
      {"a_mean", r.weighted_mean_a},
      {"a_sigma", r.sigma_a},
      {"mask_pixels", r.mask_pixels},
      {"luminance_threshold", r.luminance_threshold},
      {"band", r.triage.label},
      {"guidance", r.triage.guidance},
      {"triage", r.triage.label + "/" + r.triage.guidance},
      {"disclaimer", kDisclaimer},
  };
}

json to_json(const blink::BlinkAnalysis& b) {
  const blink::BlinkResult& r = b.result;
  return json{
      {"module", "blink"},
      {"blink_count", r.blink_count},
      {"blink_rate_per_min", r.rate_bpm},
      {"rate_ci_lo", r.ci_lo_bpm},
      {"rate_ci_hi", r.ci_hi_bpm},
      {"threshold", r.threshold},
      {"baseline_median", r.baseline_median},
      {"baseline_sigma", r.baseline_sigma},
      {"alpha", r.alpha},
      {"min_frames", r.min_frames},
      {"smooth_window", r.smooth_window},
      {"baseline_frames", r.baseline_frames},
      {"duration_s", r.duration_s},
      {"dropped_frames", b.dropped_frames},
      {"stratum", blink::to_string(r.stratum)},
      {"triage", blink::stratum_guidance(r.stratum)},
      {"ear_series", {{"fps", b.raw.fps}, {"raw", series_json(b.raw.values)}, {"smoothed", series_json(b.smoothed.values)}}},
      {"disclaimer", kDisclaimer},
  };
}

std::string pupil_guidance(const pupil::PlrMetrics& m) {
  if (m.quality.q < pupil::kFitQualityGate) return "capture quality too low for a reliable reading; repeat the recording";
  if (m.delta_rel_pct < 5.0) return "little or no constriction recorded; repeat with a brighter stimulus or seek evaluation";
  return "constriction response recorded";
}

json to_json(const pupil::PupilAnalysis& p) {
  const pupil::PlrMetrics& m = p.metrics;
  std::vector<double> values = p.series.values;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!p.series.detected[k]) values[k] = std::nan("");
  json fit = nullptr;
  if (m.fit) {
    fit = json{{"latency_ms", m.fit->latency_ms},
               {"tau_s", m.fit->tau_s},
               {"residual_rms", m.fit->residual_rms},
               {"iterations", m.fit->iterations},
               {"limb_frames", m.fit->limb_frames}};
  }
  return json{
      {"module", "pupil"},
      {"eye", to_string(p.eye)},
      {"pir_base", m.pir_base},
      {"pir_min", m.pir_min},
      {"delta", m.delta},
      {"delta_rel_pct", m.delta_rel_pct},
      {"latency_ms", m.latency_ms},
      {"t_stim", m.t_stim},
      {"t_min_s", m.t_min_s},
      {"constriction_velocity",
       {{"v_mean", m.v_mean ? json(*m.v_mean) : json(nullptr)},
        {"v_mean_unit", "PIR/ms"},
        {"v_max", m.v_max},
        {"v_max_unit", "PIR/s"}}},
      {"quality", {{"q", m.quality.q}, {"detect", m.quality.detect}, {"stable", m.quality.stable}, {"resp", m.quality.resp}}},
      {"fit_status", pupil::to_string(m.fit_status)},
      {"fit", fit},
      {"pir_series", {{"fps", p.series.fps}, {"values", series_json(values)}}},
      {"triage", pupil_guidance(m)},
      {"disclaimer", kDisclaimer},
  };
}

json to_json(const color_indices::ColorIndexResult& c) {
  return json{
      {"module", "color"},
      {"yellow_index", c.yellow_index},
      {"yellow_lo", c.yellow_lo},
      {"yellow_hi", c.yellow_hi},
      {"pallor_index", c.pallor_index},
      {"l_term", c.l_term},
      {"a_term", c.a_term},
      {"mean_b", c.mean_b},
      {"sigma_b", c.sigma_b},
      {"mean_L", c.mean_L},
      {"mean_a", c.mean_a},
      {"gains", {{"b", c.gains.b}, {"g", c.gains.g}, {"r", c.gains.r}, {"reference_gray", c.gains.reference_gray}}},
      {"mask_pixels", c.mask_pixels},
      {"yellow_flagged", c.yellow_flagged},
      {"pallor_flagged", c.pallor_flagged},
      {"triage", c.triage},
      {"disclaimer", kDisclaimer},
  };
}

std::string lesion_guidance(lesion::Status s, const std::optional<lesion::TrendAssessment>& trend) {
  std::string text;
  switch (s) {
    case lesion::Status::Absent: text = "no encroachment detected"; break;
    case lesion::Status::Trace: text = "trace finding below 0.5 mm; re-image to confirm"; break;
    case lesion::Status::Present: text = "encroachment measured; recommend clinical evaluation"; break;
  }
  if (trend && trend->significant.value_or(false)) text += "; growth rate above 0.005 mm/day, seek evaluation";
  return text;
}

json to_json(const lesion::LesionMeasurement& m, const std::optional<lesion::TrendAssessment>& trend) {
  const lesion::IrisCalibration& c = m.calibration;
  json t = nullptr;
  if (trend) {
    t = json{{"label", lesion::to_string(trend->label)},
             {"delta_mm", trend->delta_mm},
             {"delta_days", trend->delta_days},
             {"growth_mm_per_day", trend->growth_mm_per_day ? json(*trend->growth_mm_per_day) : json(nullptr)},
             {"significant", trend->significant ? json(*trend->significant) : json(nullptr)}};
  }
  return json{
      {"module", "lesion"},
      {"encroachment_mm", m.d_mm},
      {"encroachment_lo_mm", m.d_lo_mm},
      {"encroachment_hi_mm", m.d_hi_mm},
      {"d_px", m.d_px},
      {"status", lesion::to_string(m.status)},
      {"sector", lesion::to_string(m.sector)},
      {"calibration",
       {{"source", lesion::to_string(c.source)},
        {"center", json::array({c.center.x, c.center.y})},
        {"radius_px", c.radius_px},
        {"lambda_mm_per_px", c.lambda_mm_per_px},
        {"lambda_lo", c.lambda_lo},
        {"lambda_hi", c.lambda_hi},
        {"epsilon_rel", c.epsilon_rel}}},
      {"mask_pixels", {{"in_band", m.lesion_pixels_in_band}, {"total", m.lesion_pixels_total}}},
      {"trend", t},
      {"triage", lesion_guidance(m.status, trend)},
      {"disclaimer", kDisclaimer},
  };
}

namespace {

json num() { return {{"type", "number"}}; }
json num(double lo, double hi) { return {{"type", "number"}, {"minimum", lo}, {"maximum", hi}}; }
json nonneg() { return {{"type", "number"}, {"minimum", 0}}; }
json count() { return {{"type", "integer"}, {"minimum", 0}}; }
json text() { return {{"type", "string"}}; }
json flag() { return {{"type", "boolean"}}; }
json one_of(std::initializer_list<const char*> values) {
  json e = json::array();
  for (const char* v : values) e.push_back(v);
  return {{"type", "string"}, {"enum", e}};
}
json nullable(json s) {
  s["type"] = json::array({s["type"], "null"});
  return s;
}
json array_of(json item) { return {{"type", "array"}, {"items", std::move(item)}}; }

// Every listed property is required and nothing else is allowed.
json closed(json props) {
  json req = json::array();
  for (const auto& [k, v] : props.items()) req.push_back(k);
  return {{"type", "object"}, {"properties", std::move(props)}, {"required", req}, {"additionalProperties", false}};
}

json module_tag(const char* name) { return {{"const", name}}; }

json build_schema(Module m) {
  switch (m) {
    case Module::Redness:
      return closed({{"module", module_tag("redness")},
                     {"redness_score", num(0, 10)},
                     {"score_lo", num(0, 10)},
                     {"score_hi", num(0, 10)},
                     {"a_mean", num(0, 255)},
                     {"a_sigma", nonneg()},
                     {"mask_pixels", count()},
                     {"luminance_threshold", {{"type", "integer"}, {"minimum", 0}, {"maximum", 255}}},
                     {"band", one_of({"normal", "mild", "moderate", "severe"})},
                     {"guidance", text()},
                     {"triage", text()},
                     {"disclaimer", text()}});
    case Module::Blink:
      return closed({{"module", module_tag("blink")},
                     {"blink_count", count()},
                     {"blink_rate_per_min", nonneg()},
                     {"rate_ci_lo", nonneg()},
                     {"rate_ci_hi", nonneg()},
                     {"threshold", num()},
                     {"baseline_median", num()},
                     {"baseline_sigma", nonneg()},
                     {"alpha", num()},
                     {"min_frames", count()},
                     {"smooth_window", count()},
                     {"baseline_frames", count()},
                     {"duration_s", nonneg()},
                     {"dropped_frames", count()},
                     {"stratum", one_of({"high-risk", "elevated", "normal", "elevated-irritation"})},
                     {"triage", text()},
                     {"ear_series", closed({{"fps", nonneg()},
                                            {"raw", array_of(nullable(num()))},
                                            {"smoothed", array_of(nullable(num()))}})},
                     {"disclaimer", text()}});
    case Module::Pupil:
      return closed(
          {{"module", module_tag("pupil")},
           {"eye", one_of({"left", "right"})},
           {"pir_base", nonneg()},
           {"pir_min", nonneg()},
           {"delta", num()},
           {"delta_rel_pct", num()},
           {"latency_ms", num()},
           {"t_stim", nonneg()},
           {"t_min_s", nonneg()},
           {"constriction_velocity", closed({{"v_mean", nullable(num())},
                                             {"v_mean_unit", {{"const", "PIR/ms"}}},
                                             {"v_max", nonneg()},
                                             {"v_max_unit", {{"const", "PIR/s"}}}})},
           {"quality", closed({{"q", num(0, 1)}, {"detect", num(0, 1)}, {"stable", num(0, 1)}, {"resp", num(0, 1)}})},
           {"fit_status", one_of({"fitted", "skipped-quality", "skipped-short-limb", "no-convergence"})},
           {"fit", nullable(closed({{"latency_ms", num()},
                                    {"tau_s", num()},
                                    {"residual_rms", nonneg()},
                                    {"iterations", count()},
                                    {"limb_frames", count()}}))},
           {"pir_series", closed({{"fps", nonneg()}, {"values", array_of(nullable(num()))}})},
           {"triage", text()},
           {"disclaimer", text()}});
    case Module::Color:
      return closed({{"module", module_tag("color")},
                     {"yellow_index", num(0, 1)},
                     {"yellow_lo", num(0, 1)},
                     {"yellow_hi", num(0, 1)},
                     {"pallor_index", num(0, 1)},
                     {"l_term", num(0, 1)},
                     {"a_term", num(0, 1)},
                     {"mean_b", num(0, 255)},
                     {"sigma_b", nonneg()},
                     {"mean_L", num(0, 255)},
                     {"mean_a", num(0, 255)},
                     {"gains", closed({{"b", nonneg()}, {"g", nonneg()}, {"r", nonneg()}, {"reference_gray", nonneg()}})},
                     {"mask_pixels", count()},
                     {"yellow_flagged", flag()},
                     {"pallor_flagged", flag()},
                     {"triage", text()},
                     {"disclaimer", text()}});
    case Module::Lesion:
      return closed({{"module", module_tag("lesion")},
                     {"encroachment_mm", nonneg()},
                     {"encroachment_lo_mm", nonneg()},
                     {"encroachment_hi_mm", nonneg()},
                     {"d_px", nonneg()},
                     {"status", one_of({"absent", "trace", "present"})},
                     {"sector", one_of({"clinical", "literal"})},
                     {"calibration", closed({{"source", one_of({"landmarks", "hough"})},
                                             {"center", {{"type", "array"}, {"items", num()}}},
                                             {"radius_px", nonneg()},
                                             {"lambda_mm_per_px", nonneg()},
                                             {"lambda_lo", nonneg()},
                                             {"lambda_hi", nonneg()},
                                             {"epsilon_rel", nonneg()}})},
                     {"mask_pixels", closed({{"in_band", count()}, {"total", count()}})},
                     {"trend", nullable(closed({{"label", one_of({"increased", "stable", "decreased"})},
                                                {"delta_mm", num()},
                                                {"delta_days", nonneg()},
                                                {"growth_mm_per_day", nullable(num())},
                                                {"significant", nullable(flag())}}))},
                     {"triage", text()},
                     {"disclaimer", text()}});
  }
  return json::object();
}

}  // namespace

const json& schema_for(Module m) {
  static const json schemas[] = {build_schema(Module::Redness), build_schema(Module::Blink),
                                 build_schema(Module::Pupil), build_schema(Module::Color),
                                 build_schema(Module::Lesion)};
  return schemas[static_cast<int>(m)];
}

}  // namespace ocular::payload
