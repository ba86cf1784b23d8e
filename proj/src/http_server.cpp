#include "httplib.h"
#include "ocular/service.hpp"

namespace ocular::service {

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

Request convert(const httplib::Request& in) {
  Request out;
  out.method = in.method;
  out.path = in.path;
  out.body = in.body;
  for (const auto& [name, part] : in.files) out.form.emplace(name, part.content);
  for (const auto& [k, v] : in.params) out.query.emplace(k, v);
  return out;
}

}  // namespace

HttpServer::HttpServer(const Api& api) : impl_(std::make_unique<Impl>()) {
  auto handler = [&api](const httplib::Request& in, httplib::Response& out) {
    const Response r = api.handle(convert(in));
    out.status = r.status;
    for (const auto& [k, v] : r.headers) out.set_header(k, v);
    out.set_content(r.body, r.content_type);
  };
  const std::string any = std::string(kApiPrefix) + "(/.*)?";
  impl_->server.Get(any, handler);
  impl_->server.Post(any, handler);
  impl_->server.set_payload_max_length(64 * 1024 * 1024);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorCode::StoreFailure, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error(ErrorCode::StoreFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
}

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace ocular::service
