#include "idealize/http_api.hpp"

#include "httplib.h"
#include "idealize/error.hpp"
#include "json.hpp"

namespace idealize::service {
namespace {

constexpr const char* kJson = "application/json";

std::string error_body(std::string_view kind, std::string_view detail) {
  nlohmann::ordered_json doc;
  doc["error"] = {{"kind", kind}, {"detail", detail}};
  return doc.dump() + "\n";
}

}  // namespace

ErrorResponse error_response(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    int status = 500;
    if (err->kind() == ErrorKind::ValidationError) status = 400;
    if (err->kind() == ErrorKind::TrendsError) status = 502;
    return {status, error_body(to_string(err->kind()), err->detail())};
  }
  return {500, error_body("InternalError", e.what())};
}

struct ApiServer::Impl {
  std::shared_ptr<const Analyzer> analyzer;
  httplib::Server server;
};

ApiServer::ApiServer(std::shared_ptr<const Analyzer> analyzer) : impl_(std::make_unique<Impl>()) {
  if (!analyzer) throw Error(ErrorKind::InvalidArgument, "api server needs an analyzer");
  impl_->analyzer = std::move(analyzer);
  auto& server = impl_->server;
  const Analyzer& an = *impl_->analyzer;

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Post("/api/v1/analyze", [&an](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto report = an.analyze(parse_request(req.body));
      res.set_content(serialize_report(report), kJson);
    } catch (const std::exception& e) {
      const auto err = error_response(e);
      res.status = err.status;
      res.set_content(err.body, kJson);
    }
  });
  server.Get("/api/v1/config", [&an](const httplib::Request&, httplib::Response& res) {
    res.set_content(an.describe(), kJson);
  });
  server.Get("/api/v1/healthz", [&an](const httplib::Request&, httplib::Response& res) {
    nlohmann::ordered_json doc{{"status", "ok"}, {"mode", std::string(an.client().mode())}};
    res.set_content(doc.dump() + "\n", kJson);
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(error_body(res.status == 404 ? "NotFound" : "HttpError", httplib::status_message(res.status)),
                    kJson);
  });
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    res.status = 500;
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      res.set_content(error_response(e).body, kJson);
    } catch (...) {
      res.set_content(error_body("InternalError", "unknown exception"), kJson);
    }
  });
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::listen(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorKind::IoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  run();
}

int ApiServer::bind_to_any_port(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error(ErrorKind::IoError, "cannot bind " + host);
  return port;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace idealize::service
