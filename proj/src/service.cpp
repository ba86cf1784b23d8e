#include "ocular/service.hpp"

#include <fmt/format.h>

#include <cstdlib>

#include "ocular/ingest.hpp"
#include "ocular/payload.hpp"
#include "ocular/pipeline.hpp"
#include "ocular/report.hpp"

namespace ocular::service {

using nlohmann::json;

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig c;
  if (const char* v = std::getenv("DATA_DIR"); v && *v) c.data_dir = v;
  if (const char* v = std::getenv("BIND_ADDR"); v && *v) c.bind_addr = v;
  if (const char* v = std::getenv("PORT"); v && *v) {
    char* end = nullptr;
    const long p = std::strtol(v, &end, 10);
    if (*end != '\0' || p < 0 || p > 65535) throw Error(ErrorCode::InvalidArgument, "PORT must be 0-65535", v);
    c.port = static_cast<int>(p);
  }
  return c;
}

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::ConsentRequired: return 403;
    case ErrorCode::DuplicateId:
    case ErrorCode::NonMonotonicTimestamps: return 409;
    case ErrorCode::ZeroChannelMean:
    case ErrorCode::ConstantImage:
    case ErrorCode::NoCircleFound:
    case ErrorCode::InsufficientSclera:
    case ErrorCode::NoLandmarks:
    case ErrorCode::TooShort:
    case ErrorCode::EmptyBaseline:
    case ErrorCode::NonPositiveDuration:
    case ErrorCode::ZeroLatency:
    case ErrorCode::NoConvergence:
    case ErrorCode::NoIrisFound:
    case ErrorCode::DegenerateTimeAxis: return 422;
    case ErrorCode::StoreFailure: return 500;
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSpec:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::CorruptFile:
    case ErrorCode::SchemaViolation:
    case ErrorCode::NonMonotonicFrames:
    case ErrorCode::ValidationFailed: return 400;
  }
  return 500;
}

json error_body(const Error& e) {
  json err{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (!e.detail().empty()) err["detail"] = e.detail();
  return json{{"error", err}};
}

namespace {

Response json_response(int status, const json& body) { return Response{status, "application/json", body.dump(), {}}; }

Response error_response(const Error& e) { return json_response(http_status(e.code()), error_body(e)); }

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    const std::size_t next = path.find('/', pos);
    const std::size_t end = next == std::string_view::npos ? path.size() : next;
    if (end > pos) parts.emplace_back(path.substr(pos, end - pos));
    pos = end + 1;
  }
  return parts;
}

const std::string* param(const Request& req, const std::string& key) {
  if (const auto it = req.form.find(key); it != req.form.end()) return &it->second;
  if (const auto it = req.query.find(key); it != req.query.end()) return &it->second;
  return nullptr;
}

double number_param(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !std::isfinite(v)) {
    throw Error(ErrorCode::ValidationFailed, fmt::format("'{}' must be a number", key), key);
  }
  return v;
}

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

}  // namespace

Response Api::handle(const Request& req) const {
  try {
    const std::vector<std::string> p = split_path(req.path);
    if (p.empty() || p[0] != "api") throw Error(ErrorCode::NotFound, fmt::format("no route for {}", req.path));
    const bool get = req.method == "GET", post = req.method == "POST";
    if (p.size() == 2 && p[1] == "sessions") {
      if (post) return create_session(req);
      if (get) return list_sessions();
    } else if (p.size() == 3 && p[1] == "sessions" && get) {
      return get_session(p[2]);
    } else if (p.size() == 4 && p[1] == "sessions" && p[3] == "report.pdf" && get) {
      return report(p[2], req);
    } else if (p.size() == 3 && p[1] == "analyze" && post) {
      return analyze(p[2], req);
    }
    throw Error(ErrorCode::NotFound, fmt::format("no route for {} {}", req.method, req.path));
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return json_response(500, json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}});
  }
}

Response Api::create_session(const Request& req) const {
  const json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorCode::ValidationFailed, "request body must be JSON", "body");
  const json& intake = body.contains("intake") ? body["intake"] : body;
  const sessions::SessionDocument d = repo_.create(sessions::intake_from_json(intake));
  json out = sessions::to_json(d);
  out["session_id"] = d.id;
  return json_response(201, out);
}

Response Api::list_sessions() const {
  json out = json::array();
  for (const sessions::SessionSummary& s : repo_.list()) out.push_back(sessions::to_json(s));
  return json_response(200, out);
}

Response Api::get_session(const std::string& id) const { return json_response(200, sessions::to_json(repo_.get(id))); }

Response Api::report(const std::string& id, const Request& req) const {
  const json r = report::build_report(repo_.get(id));
  const auto fmt = req.query.find("format");
  if (fmt != req.query.end() && fmt->second == "json") return json_response(200, r);
  Response out{200, "text/html; charset=utf-8", report::render_html(r), {}};
  out.headers["Content-Disposition"] = fmt::format("inline; filename=\"report-{}.html\"", id);
  return out;
}

Response Api::analyze(const std::string& module_name, const Request& req) const {
  const payload::Module module = [&] {
    try {
      return payload::parse_module(module_name);
    } catch (const Error&) {
      throw Error(ErrorCode::NotFound, fmt::format("no analysis module '{}'", module_name), module_name);
    }
  }();
  const auto file = req.form.find("file");
  if (file == req.form.end()) throw Error(ErrorCode::ValidationFailed, "multipart field 'file' is required", "file");

  pipeline::AnalysisOptions opt;
  if (const std::string* v = param(req, "t_stim")) opt.t_stim = number_param("t_stim", *v);
  if (const std::string* v = param(req, "alpha")) opt.alpha = number_param("alpha", *v);
  if (const std::string* v = param(req, "sector")) opt.sector = lesion::parse_sector_mode(*v);
  if (const auto lm = req.form.find("landmarks"); lm != req.form.end()) {
    opt.iris = pipeline::first_iris(ingest::load_trace(lm->second));
  }

  const std::string* session = param(req, "session_id");
  json result;
  if (session && !session->empty()) {
    repo_.record(*session, module, [&](const sessions::SessionDocument& d, Timestamp at) {
      const auto history = sessions::lesion_history(d);
      result = pipeline::run_analysis(module, bytes_of(file->second), opt, history, at);
      return result;
    });
  } else {
    result = pipeline::run_analysis(module, bytes_of(file->second), opt, {}, repo_.now());
  }
  return json_response(200, result);
}

}  // namespace ocular::service
