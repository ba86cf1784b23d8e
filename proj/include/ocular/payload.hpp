#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ocular/blink.hpp"
#include "ocular/color_indices.hpp"
#include "ocular/lesion.hpp"
#include "ocular/pupil.hpp"
#include "ocular/redness.hpp"

namespace ocular::payload {

using nlohmann::json;

enum class Module { Redness, Blink, Pupil, Color, Lesion };

std::string to_string(Module m);
Module parse_module(std::string_view text);  // InvalidArgument
inline constexpr Module kAllModules[] = {Module::Redness, Module::Blink, Module::Pupil, Module::Color,
                                         Module::Lesion};

extern const std::string_view kDisclaimer;

json to_json(const redness::RednessResult& r);
json to_json(const blink::BlinkAnalysis& b);
json to_json(const pupil::PupilAnalysis& p);
json to_json(const color_indices::ColorIndexResult& c);
json to_json(const lesion::LesionMeasurement& m, const std::optional<lesion::TrendAssessment>& trend);

std::string pupil_guidance(const pupil::PlrMetrics& m);
std::string lesion_guidance(lesion::Status s, const std::optional<lesion::TrendAssessment>& trend);

// Published JSON schema (subset dialect, see schema.hpp) for each payload.
const json& schema_for(Module m);

}  // namespace ocular::payload
