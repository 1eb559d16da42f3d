#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idealize {

enum class ErrorKind {
  // text_pipeline / graph_rank
  LexiconUnavailable,
  InvalidWindow,
  EmptyGraph,
  EmptyExtraction,
  // trends
  EmptySeries,
  FixtureMissing,
  FixtureInvalid,
  WireError,
  QuotaExceeded,
  // scoring
  EmptyKeywordSet,
  NonPositiveWeight,
  MissingSeries,
  GridMismatch,
  MissingTable,
  UnknownRegion,
  UnknownGeo,
  // service
  ValidationError,
  ExtractionError,
  TrendsError,
  ConfigError,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail, bool retryable = false);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  // Only meaningful for WireError.
  bool retryable() const noexcept { return retryable_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  bool retryable_;
};

}  // namespace idealize
