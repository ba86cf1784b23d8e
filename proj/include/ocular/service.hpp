#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "json.hpp"
#include "ocular/error.hpp"
#include "ocular/sessions.hpp"

namespace ocular::service {

inline constexpr const char* kApiPrefix = "/api";

struct ServiceConfig {
  std::filesystem::path data_dir = "data";
  std::string bind_addr = "0.0.0.0";
  int port = 8001;

  // DATA_DIR, BIND_ADDR, PORT; unset variables keep the defaults.
  static ServiceConfig from_env();
};

// Transport-neutral request: multipart parts and query parameters are
// flattened into `form`, parts first.
struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> form;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

int http_status(ErrorCode code) noexcept;
nlohmann::json error_body(const Error& e);

class Api {
 public:
  explicit Api(sessions::SessionRepository& repo) : repo_(repo) {}
  Response handle(const Request& req) const;

 private:
  Response create_session(const Request& req) const;
  Response list_sessions() const;
  Response get_session(const std::string& id) const;
  Response report(const std::string& id, const Request& req) const;
  Response analyze(const std::string& module, const Request& req) const;

  sessions::SessionRepository& repo_;
};

// cpp-httplib front end. start() binds (port 0 picks a free port) and serves
// on a background thread; run() blocks.
class HttpServer {
 public:
  explicit HttpServer(const Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  int start(const std::string& host, int port);  // returns the bound port; StoreFailure if binding fails
  void run(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace ocular::service
