#include "idealize/error.hpp"

namespace idealize {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::LexiconUnavailable: return "LexiconUnavailable";
    case ErrorKind::InvalidWindow: return "InvalidWindow";
    case ErrorKind::EmptyGraph: return "EmptyGraph";
    case ErrorKind::EmptyExtraction: return "EmptyExtraction";
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::FixtureMissing: return "FixtureMissing";
    case ErrorKind::FixtureInvalid: return "FixtureInvalid";
    case ErrorKind::WireError: return "WireError";
    case ErrorKind::QuotaExceeded: return "QuotaExceeded";
    case ErrorKind::EmptyKeywordSet: return "EmptyKeywordSet";
    case ErrorKind::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorKind::MissingSeries: return "MissingSeries";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::MissingTable: return "MissingTable";
    case ErrorKind::UnknownRegion: return "UnknownRegion";
    case ErrorKind::UnknownGeo: return "UnknownGeo";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::ExtractionError: return "ExtractionError";
    case ErrorKind::TrendsError: return "TrendsError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& detail, bool retryable)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail),
      retryable_(retryable) {}

}  // namespace idealize
