#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ledgerlift {

enum class ErrorCode {
    NotANumber,
    Negative,
    ColumnCountMismatch,
    InvalidRowType,
    LevelBeyondDepth,
    FileNotFound,
    RasterizerFailed,
    BackendFailure,
    IncompletePrompt,
    SegmentParseError,
    Unrepairable,
    InconsistentPath,
    DuplicateTotal,
    DuplicateRow,
    MissingTotal,
    EmptyResults,
    EmptyScores,
    InsufficientTargets,
    MissingStageOutput,
    InvalidConfig,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

    // Same code, message prefixed with where it happened.
    Error within(const std::string& where) const { return Error(code_, where + ": " + detail_); }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace ledgerlift
