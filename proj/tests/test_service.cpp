#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "httplib.h"
#include "ocular/ingest.hpp"
#include "ocular/phantom.hpp"
#include "ocular/service.hpp"
#include "ocular/sessions.hpp"
#include "support.hpp"

using namespace ocular;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string as_string(const std::vector<std::uint8_t>& b) { return {b.begin(), b.end()}; }

std::string healthy_photo() {
  return as_string(ingest::encode_png(phantom::synth_eye_image({.tint = phantom::ScleralTint{0, 0}}).image));
}

std::string blink_trace() {
  phantom::EarSpec ear;
  ear.duration_s = 10;
  ear.blink_times = {2, 5, 8};
  return ingest::serialize_trace(phantom::synth_ear_trace(ear).trace);
}

const char* kIntake = R"({"consent":true,"name":"A","age":30,"pain_level":1})";

struct Fixture {
  sessions::MemoryDocumentStore store;
  sessions::SessionRepository repo{store};
  service::Api api{repo};

  service::Response call(std::string method, std::string path, std::map<std::string, std::string> form = {},
                         std::string body = {}, std::map<std::string, std::string> query = {}) {
    return api.handle({std::move(method), std::move(path), std::move(form), std::move(query), std::move(body)});
  }
  std::string new_session() {
    const auto r = call("POST", "/api/sessions", {}, kIntake);
    REQUIRE(r.status == 201);
    return json::parse(r.body)["session_id"].get<std::string>();
  }
};

std::string error_code_of(const service::Response& r) { return json::parse(r.body)["error"]["code"].get<std::string>(); }

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("ocular-svc-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  f << s;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = cli::cli_main(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("status mapping") {
    CHECK(service::http_status(ErrorCode::NotFound) == 404);
    CHECK(service::http_status(ErrorCode::ConsentRequired) == 403);
    CHECK(service::http_status(ErrorCode::DuplicateId) == 409);
    CHECK(service::http_status(ErrorCode::NoIrisFound) == 422);
    CHECK(service::http_status(ErrorCode::TooShort) == 422);
    CHECK(service::http_status(ErrorCode::ValidationFailed) == 400);
    CHECK(service::http_status(ErrorCode::SchemaViolation) == 400);
    CHECK(service::http_status(ErrorCode::StoreFailure) == 500);
    const json b = service::error_body(Error(ErrorCode::ValidationFailed, "bad", "age"));
    CHECK(b == json::parse(R"({"error":{"code":"ValidationFailed","message":"bad","detail":"age"}})"));
  }

  TEST_CASE("empty list then one session") {
    Fixture f;
    auto r = f.call("GET", "/api/sessions");
    CHECK(r.status == 200);
    CHECK(r.body == "[]");
    const std::string id = f.new_session();
    CHECK(sessions::is_uuid(id));
    r = f.call("GET", "/api/sessions");
    CHECK(json::parse(r.body).size() == 1);
    r = f.call("GET", "/api/sessions/" + id);
    CHECK(r.status == 200);
    CHECK(json::parse(r.body)["intake"]["age"] == 30);
  }

  TEST_CASE("session creation errors") {
    Fixture f;
    CHECK(f.call("POST", "/api/sessions", {}, R"({"consent":false,"age":30,"pain_level":1})").status == 403);
    auto r = f.call("POST", "/api/sessions", {}, R"({"intake":{"consent":true,"age":17,"pain_level":1}})");
    CHECK(r.status == 400);
    CHECK(json::parse(r.body)["error"]["detail"] == "age");
    CHECK(f.call("POST", "/api/sessions", {}, "{oops").status == 400);
    CHECK(f.call("GET", "/api/sessions").body == "[]");
  }

  TEST_CASE("unknown routes and ids") {
    Fixture f;
    CHECK(f.call("GET", "/api/nothing").status == 404);
    CHECK(f.call("GET", "/api/sessions/00000000-0000-4000-8000-000000000000").status == 404);
    CHECK(f.call("POST", "/api/analyze/retina", {{"file", "x"}}).status == 404);
    CHECK(f.call("DELETE", "/api/sessions").status >= 400);
  }

  TEST_CASE("redness analysis without a session") {
    Fixture f;
    const auto r = f.call("POST", "/api/analyze/redness", {{"file", healthy_photo()}});
    CHECK(r.status == 200);
    CHECK(r.content_type.find("application/json") == 0);
    const json p = json::parse(r.body);
    CHECK(p.contains("redness_score"));
    CHECK(p["module"] == "redness");
  }

  TEST_CASE("missing file part") {
    Fixture f;
    const auto r = f.call("POST", "/api/analyze/redness", {});
    CHECK(r.status == 400);
    CHECK(error_code_of(r) == "ValidationFailed");
  }

  TEST_CASE("unknown session on a lesion upload") {
    Fixture f;
    const auto r = f.call("POST", "/api/analyze/lesion",
                          {{"file", healthy_photo()}, {"session_id", "00000000-0000-4000-8000-000000000001"}});
    CHECK(r.status == 404);
  }

  TEST_CASE("blank photo on lesion gives 422 and no entry") {
    Fixture f;
    const std::string id = f.new_session();
    const std::string blank = as_string(ingest::encode_png(test::uniform(200, 150, {230, 230, 230})));
    const auto r = f.call("POST", "/api/analyze/lesion", {{"file", blank}, {"session_id", id}});
    CHECK(r.status == 422);
    CHECK(error_code_of(r) == "NoIrisFound");
    CHECK(f.repo.get(id).results.empty());
  }

  TEST_CASE("blink upload appends exactly one entry") {
    Fixture f;
    const std::string id = f.new_session();
    const auto r = f.call("POST", "/api/analyze/blink", {{"file", blink_trace()}, {"session_id", id}});
    REQUIRE(r.status == 200);
    const json p = json::parse(r.body);
    CHECK(p["blink_count"] == 3);
    CHECK(p["blink_rate_per_min"].get<double>() == doctest::Approx(18.0));
    const auto d = f.repo.get(id);
    REQUIRE(d.results.size() == 1);
    CHECK(d.results[0].module == payload::Module::Blink);
    CHECK(d.results[0].payload == p);
  }

  TEST_CASE("stimulus time reaches the pupil module") {
    Fixture f;
    phantom::PirSpec spec;
    spec.duration_s = 8;
    spec.t_stim = 2.5;
    const std::string trace = ingest::serialize_trace(phantom::synth_pir_trace(spec).trace);
    const auto r = f.call("POST", "/api/analyze/pupil", {{"file", trace}, {"t_stim", "2.5"}});
    REQUIRE(r.status == 200);
    CHECK(json::parse(r.body)["t_stim"] == 2.5);
    const auto bad = f.call("POST", "/api/analyze/pupil", {{"file", trace}, {"t_stim", "soon"}});
    CHECK(bad.status == 400);
  }

  TEST_CASE("report route") {
    Fixture f;
    const std::string id = f.new_session();
    auto r = f.call("GET", "/api/sessions/" + id + "/report.pdf");
    CHECK(r.status == 200);
    CHECK(r.content_type.find("text/html") == 0);
    CHECK(r.headers.count("Content-Disposition") == 1);
    r = f.call("GET", "/api/sessions/" + id + "/report.pdf", {}, {}, {{"format", "json"}});
    CHECK(json::parse(r.body)["session_id"] == id);
  }

  TEST_CASE("real socket round trip") {
    Fixture f;
    service::HttpServer server(f.api);
    const int port = server.start("127.0.0.1", 0);
    REQUIRE(port > 0);
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(30, 0);

    auto res = client.Post("/api/sessions", kIntake, "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);
    const std::string id = json::parse(res->body)["session_id"];

    httplib::MultipartFormDataItems items = {{"file", blink_trace(), "trace.jsonl", "application/jsonl"},
                                             {"session_id", id, "", ""}};
    res = client.Post("/api/analyze/blink", items);
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["blink_count"] == 3);

    res = client.Get("/api/sessions/" + id);
    REQUIRE(res);
    CHECK(json::parse(res->body)["results"].size() == 1);

    res = client.Get("/api/sessions/" + id + "/report.pdf?format=json");
    REQUIRE(res);
    CHECK(json::parse(res->body)["sections"].size() == 1);

    res = client.Get("/api/missing");
    REQUIRE(res);
    CHECK(res->status == 404);
    server.stop();
  }
}

TEST_SUITE("cli") {
  TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run_cli({}) == cli::kExitUsage);
    CHECK(run_cli({"analyze", "retina", "-i", "x"}) == cli::kExitUsage);
    std::string err;
    CHECK(run_cli({"analyze", "redness", "-i", (dir.path / "missing.png").string()}, nullptr, &err) ==
          cli::kExitEngineError);
    CHECK(err.find("error: NotFound") == 0);
    const fs::path trace = dir.path / "t.jsonl";
    write_file(trace, blink_trace());
    CHECK(run_cli({"analyze", "redness", "-i", trace.string()}, nullptr, &err) == cli::kExitEngineError);
    CHECK(err.find("UnsupportedFormat") != std::string::npos);
    std::string out;
    CHECK(run_cli({"analyze", "blink", "-i", trace.string()}, &out) == cli::kExitOk);
    CHECK(out.find("3") != std::string::npos);
  }

  TEST_CASE("session lifecycle through the command line") {
    TempDir dir;
    const std::string data = (dir.path / "data").string();
    std::string out, err;
    CHECK(run_cli({"--data-dir", data, "session", "create", "--age", "17", "--pain", "0", "--consent"}, &out, &err) ==
          cli::kExitEngineError);
    CHECK(err.find("ValidationFailed") != std::string::npos);
    CHECK(run_cli({"--data-dir", data, "session", "create", "--age", "40", "--pain", "0"}, &out, &err) ==
          cli::kExitEngineError);
    CHECK(err.find("ConsentRequired") != std::string::npos);
    REQUIRE(run_cli({"--data-dir", data, "session", "create", "--age", "40", "--pain", "3", "--consent"}, &out) ==
            cli::kExitOk);
    std::string id = out;
    while (!id.empty() && std::isspace(static_cast<unsigned char>(id.back()))) id.pop_back();
    CHECK(sessions::is_uuid(id));

    const fs::path trace = dir.path / "t.jsonl";
    write_file(trace, blink_trace());
    CHECK(run_cli({"--data-dir", data, "analyze", "blink", "-i", trace.string(), "--session", id}) == cli::kExitOk);
    CHECK(run_cli({"--data-dir", data, "session", "show", id}, &out) == cli::kExitOk);
    CHECK(json::parse(out)["results"].size() == 1);
    const fs::path rep = dir.path / "nested" / "r.json";
    CHECK(run_cli({"--data-dir", data, "session", "report", id, "-o", rep.string()}) == cli::kExitOk);
    CHECK(json::parse(read_file(rep))["sections"].size() == 1);
    CHECK(fs::exists(rep.parent_path() / "report.html"));
  }

  TEST_CASE("command line and HTTP payloads are byte-identical") {
    TempDir dir;
    Fixture f;
    const fs::path photo = dir.path / "eye.png";
    const fs::path trace = dir.path / "t.jsonl";
    write_file(photo, healthy_photo());
    write_file(trace, blink_trace());
    phantom::PirSpec pir;
    const fs::path pir_path = dir.path / "p.jsonl";
    write_file(pir_path, ingest::serialize_trace(phantom::synth_pir_trace(pir).trace));
    const std::pair<const char*, fs::path> cases[] = {
        {"redness", photo}, {"color", photo}, {"lesion", photo}, {"blink", trace}, {"pupil", pir_path}};
    for (const auto& [module, input] : cases) {
      INFO(module);
      const fs::path out = dir.path / (std::string(module) + ".json");
      REQUIRE(run_cli({"analyze", module, "-i", input.string(), "-o", out.string()}) == cli::kExitOk);
      const auto r = f.call("POST", std::string("/api/analyze/") + module, {{"file", read_file(input)}});
      REQUIRE(r.status == 200);
      CHECK(read_file(out) == r.body);
    }
  }

  TEST_CASE("phantom commands write usable fixtures") {
    TempDir dir;
    const fs::path ear = dir.path / "ear.jsonl";
    REQUIRE(run_cli({"phantom", "ear", "--duration", "10", "--blinks", "2,5,8", "-o", ear.string()}) == cli::kExitOk);
    CHECK(read_file(ear) == blink_trace());
    const fs::path eye = dir.path / "eye.png";
    REQUIRE(run_cli({"phantom", "eye", "-o", eye.string()}) == cli::kExitOk);
    CHECK(ingest::detect_media_kind(ingest::read_file(eye)) == ingest::MediaKind::Photo);
  }
}
