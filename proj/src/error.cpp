#include "lodstory/error.hpp"

namespace lodstory {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::EndpointRejected: return "EndpointRejected";
    case ErrorCode::MalformedResults: return "MalformedResults";
    case ErrorCode::NotSelectQuery: return "NotSelectQuery";
    case ErrorCode::InvalidEndpointUrl: return "InvalidEndpointUrl";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::EmptyTitle: return "EmptyTitle";
    case ErrorCode::UnknownTemplate: return "UnknownTemplate";
    case ErrorCode::UnknownComponent: return "UnknownComponent";
    case ErrorCode::DuplicateComponent: return "DuplicateComponent";
    case ErrorCode::InvalidPosition: return "InvalidPosition";
    case ErrorCode::BrokenActionReference: return "BrokenActionReference";
    case ErrorCode::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NoRows: return "NoRows";
    case ErrorCode::NotNumeric: return "NotNumeric";
    case ErrorCode::MissingVariable: return "MissingVariable";
    case ErrorCode::NonNumericX: return "NonNumericX";
    case ErrorCode::PlaceholderMissing: return "PlaceholderMissing";
    case ErrorCode::UnescapableValue: return "UnescapableValue";
    case ErrorCode::MissingPayload: return "MissingPayload";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::NotTabular: return "NotTabular";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::AuthRequired: return "AuthRequired";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::RevisionConflict: return "RevisionConflict";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::PublishTargetUnavailable: return "PublishTargetUnavailable";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace lodstory
