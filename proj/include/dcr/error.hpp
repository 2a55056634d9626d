#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dcr {

enum class ErrorCode {
    EmptyText,
    BadLabel,
    NoSentences,
    InvalidArgument,
    InvalidSettings,
    TransportError,
    ProviderRefusal,
    Timeout,
    MockMiss,
    MissingPlaceholder,
    UnknownTemplate,
    ParseError,
    SchemaError,
    LengthMismatch,
    BadMark,
    AllExcluded,
    ItemFailed,
    Aborted,
    DegenerateSeries,
    SingleClass,
    NoInconsistent,
    FileMissing,
    SchemaMismatch,
    EmptyDataset,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the prompt renderer; lists every placeholder that had no value.
class MissingPlaceholderError : public Error {
public:
    explicit MissingPlaceholderError(std::vector<std::string> names);

    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
};

}  // namespace dcr
