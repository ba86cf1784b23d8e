#pragma once

#include <string>

#include "json.hpp"
#include "ocular/sessions.hpp"

namespace ocular::report {

inline constexpr const char* kNoAnalysesNotice = "No analyses have been recorded for this session.";

// Deterministic structured report: intake echo, one section per result,
// and a lesion growth line once three or more lesion results exist.
nlohmann::json build_report(const sessions::SessionDocument& d);
std::string render_html(const nlohmann::json& report);

std::string html_escape(std::string_view text);

}  // namespace ocular::report
