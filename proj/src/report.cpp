#include "ocular/report.hpp"

#include <fmt/format.h>

#include "ocular/error.hpp"
#include "ocular/payload.hpp"

namespace ocular::report {

using nlohmann::json;

namespace {

// Headline metrics per module: (label, payload key, lower bound key, upper bound key).
struct Metric {
  const char* label;
  const char* key;
  const char* lo;
  const char* hi;
};

std::vector<Metric> headline(payload::Module m) {
  using payload::Module;
  switch (m) {
    case Module::Redness:
      return {{"Redness score (0-10)", "redness_score", "score_lo", "score_hi"},
              {"Mean a* (8-bit)", "a_mean", nullptr, nullptr},
              {"Scleral mask pixels", "mask_pixels", nullptr, nullptr}};
    case Module::Blink:
      return {{"Blink count", "blink_count", nullptr, nullptr},
              {"Blink rate (per min)", "blink_rate_per_min", "rate_ci_lo", "rate_ci_hi"},
              {"Recording length (s)", "duration_s", nullptr, nullptr}};
    case Module::Pupil:
      return {{"Baseline PIR", "pir_base", nullptr, nullptr},
              {"Minimum PIR", "pir_min", nullptr, nullptr},
              {"Constriction amplitude (%)", "delta_rel_pct", nullptr, nullptr},
              {"Time to minimum (ms)", "latency_ms", nullptr, nullptr}};
    case Module::Color:
      return {{"Yellow index", "yellow_index", "yellow_lo", "yellow_hi"},
              {"Pallor index", "pallor_index", nullptr, nullptr}};
    case Module::Lesion:
      return {{"Encroachment (mm)", "encroachment_mm", "encroachment_lo_mm", "encroachment_hi_mm"},
              {"Status", "status", nullptr, nullptr}};
  }
  return {};
}

std::string render_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt::format("{:.3f}", v.get<double>());
  return v.dump();
}

}  // namespace

json build_report(const sessions::SessionDocument& d) {
  json sections = json::array();
  for (const sessions::ResultEntry& e : d.results) {
    json metrics = json::array();
    for (const Metric& m : headline(e.module)) {
      json row{{"label", m.label}, {"value", e.payload.value(m.key, json(nullptr))}};
      if (m.lo) row["lo"] = e.payload.value(m.lo, json(nullptr));
      if (m.hi) row["hi"] = e.payload.value(m.hi, json(nullptr));
      metrics.push_back(std::move(row));
    }
    json section{{"module", payload::to_string(e.module)},
                 {"created_at", format_iso8601(e.created_at)},
                 {"metrics", metrics},
                 {"triage", e.payload.value("triage", std::string())},
                 {"disclaimer", payload::kDisclaimer}};
    if (e.module == payload::Module::Lesion && !e.payload.value("trend", json(nullptr)).is_null()) {
      section["trend"] = e.payload["trend"];
    }
    sections.push_back(std::move(section));
  }

  json r{{"session_id", d.id},
         {"created_at", format_iso8601(d.created_at)},
         {"intake", sessions::to_json(d.intake)},
         {"sections", sections},
         {"disclaimer", payload::kDisclaimer}};
  if (d.results.empty()) r["notice"] = kNoAnalysesNotice;

  const auto history = sessions::lesion_history(d);
  if (history.size() >= 3) {
    const lesion::GrowthRate g = lesion::growth_rate(history);
    r["lesion_growth"] = json{{"mm_per_day", g.mm_per_day},
                              {"significant", g.significant},
                              {"points", history.size()},
                              {"text", fmt::format("Lesion growth rate: {:.4f} mm/day over {} measurements ({})",
                                                   g.mm_per_day, history.size(),
                                                   g.significant ? "significant" : "not significant")}};
  }
  return r;
}

std::string html_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_html(const json& r) {
  std::string h;
  h += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  h += fmt::format("<title>Screening report {}</title>\n", html_escape(r["session_id"].get<std::string>()));
  h += "<style>body{font-family:sans-serif;max-width:50em;margin:2em auto}table{border-collapse:collapse}"
       "td,th{border:1px solid #bbb;padding:.3em .6em;text-align:left}.disclaimer{font-size:.85em;color:#555}"
       "</style>\n</head>\n<body>\n";
  h += "<h1>Ocular screening report</h1>\n";
  h += fmt::format("<p>Session <code>{}</code>, created {}</p>\n", html_escape(r["session_id"].get<std::string>()),
                   html_escape(r["created_at"].get<std::string>()));

  const json& in = r["intake"];
  h += "<h2>Intake</h2>\n<table>\n";
  for (const char* key : {"name", "age", "email", "phone", "pain_level", "photophobia", "vision_changes", "notes"}) {
    const json& v = in[key];
    h += fmt::format("<tr><th>{}</th><td>{}</td></tr>\n", key, html_escape(v.is_null() ? "" : render_value(v)));
  }
  h += "</table>\n";
  h += fmt::format("<p class=\"disclaimer\">{}</p>\n", html_escape(r["disclaimer"].get<std::string>()));

  if (r.contains("notice")) h += fmt::format("<p><strong>{}</strong></p>\n", html_escape(r["notice"].get<std::string>()));

  for (const json& s : r["sections"]) {
    h += fmt::format("<section>\n<h2>{} <small>{}</small></h2>\n<table>\n", html_escape(s["module"].get<std::string>()),
                     html_escape(s["created_at"].get<std::string>()));
    for (const json& m : s["metrics"]) {
      std::string bounds;
      if (m.contains("lo") && !m["lo"].is_null()) {
        bounds = fmt::format(" [{} - {}]", render_value(m["lo"]), render_value(m["hi"]));
      }
      h += fmt::format("<tr><th>{}</th><td>{}{}</td></tr>\n", html_escape(m["label"].get<std::string>()),
                       html_escape(render_value(m["value"])), html_escape(bounds));
    }
    h += "</table>\n";
    if (s.contains("trend")) {
      h += fmt::format("<p>Trend: {} ({:+.3f} mm over {:.1f} days)</p>\n", html_escape(s["trend"]["label"].get<std::string>()),
                       s["trend"]["delta_mm"].get<double>(), s["trend"]["delta_days"].get<double>());
    }
    h += fmt::format("<p>{}</p>\n", html_escape(s["triage"].get<std::string>()));
    h += fmt::format("<p class=\"disclaimer\">{}</p>\n</section>\n", html_escape(s["disclaimer"].get<std::string>()));
  }

  if (r.contains("lesion_growth")) {
    h += fmt::format("<p class=\"growth\">{}</p>\n", html_escape(r["lesion_growth"]["text"].get<std::string>()));
  }
  // Machine-readable copy; '<' is escaped so the JSON cannot close the script element.
  std::string data = r.dump();
  std::string safe;
  for (char c : data) safe += c == '<' ? std::string("\\u003c") : std::string(1, c);
  h += "<script type=\"application/json\" id=\"report-data\">" + safe + "</script>\n";
  h += "</body>\n</html>\n";
  return h;
}

}  // namespace ocular::report
