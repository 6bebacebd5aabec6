#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lodstory {

enum class ErrorCode {
  // sparql_gateway
  EndpointUnreachable,
  EndpointRejected,
  MalformedResults,
  NotSelectQuery,
  InvalidEndpointUrl,
  // cell_typing
  OutOfRange,
  // story_model
  EmptyTitle,
  UnknownTemplate,
  UnknownComponent,
  DuplicateComponent,
  InvalidPosition,
  BrokenActionReference,
  SchemaVersionUnsupported,
  SchemaViolation,
  // evaluators
  NoRows,
  NotNumeric,
  MissingVariable,
  NonNumericX,
  PlaceholderMissing,
  UnescapableValue,
  // exporter
  MissingPayload,
  UnsupportedFormat,
  NotTabular,
  EmptySeries,
  // catalogue_service
  Unauthorized,
  AuthRequired,
  Forbidden,
  NotFound,
  RevisionConflict,
  ValidationFailed,
  PublishTargetUnavailable,
  RateLimited,
  BadRequest,
  // files
  IoError,
};

std::string_view to_string(ErrorCode code);

// The single exception type thrown by the library. `path` locates the fault
// inside a document (e.g. "components[2].source"), `status` carries the
// upstream HTTP status for EndpointRejected.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::string> path = std::nullopt,
        std::optional<int> status = std::nullopt)
      : std::runtime_error(message),
        code_(code),
        path_(std::move(path)),
        status_(status) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::string>& path() const noexcept { return path_; }
  const std::optional<int>& status() const noexcept { return status_; }

 private:
  ErrorCode code_;
  std::optional<std::string> path_;
  std::optional<int> status_;
};

}  // namespace lodstory
