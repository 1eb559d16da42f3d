#pragma once

// JSON API over cpp-httplib:
//   POST /api/v1/analyze   AnalysisRequest -> AnalysisReport
//   GET  /api/v1/config    contexts, timeframes, geos
//   GET  /api/v1/healthz
// Failures answer {"error": {"kind", "detail"}} with 400 for validation
// errors, 502 for trends errors and 500 for anything else.

#include <memory>
#include <string>

#include "idealize/analysis.hpp"

namespace idealize::service {

/// Status code and body for an exception escaping the analyzer.
struct ErrorResponse {
  int status = 500;
  std::string body;
};
ErrorResponse error_response(const std::exception& e);

class ApiServer {
 public:
  explicit ApiServer(std::shared_ptr<const Analyzer> analyzer);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds and serves until stop(). Throws Error(IoError) if binding fails.
  void listen(const std::string& host, int port);
  /// Binds to a free port and returns it; serve with run() on another thread.
  int bind_to_any_port(const std::string& host);
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace idealize::service
