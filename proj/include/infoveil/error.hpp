#pragma once

#include <stdexcept>
#include <string>

namespace infoveil {

/// Failure categories surfaced by the library. The CLI maps UsageError to
/// exit code 1 and everything else to exit code 2.
enum class ErrorKind {
    InvalidInput,      // bad argument values (lengths, ranges, flags)
    Alignment,         // date ranges that do not line up
    Domain,            // mathematically invalid input (nonpositive totals, ...)
    Parse,             // malformed file content, carries file/line context
    Coverage,          // insufficient series history for the requested lags
    RankDeficient,     // collinear design matrix, names the offending column
    InsufficientData,  // too few observations for the statistic
    Degenerate,        // statistic undefined on this data (zero RSS, D_e = 0)
    Lookup,            // unknown column or key
    Io,                // file open/write failures
    Config,            // invalid configuration (unstable AR spec, bad paths)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace infoveil
