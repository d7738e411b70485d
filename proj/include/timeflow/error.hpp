#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace timeflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Optimistic-concurrency failure: the caller's expected version tag is stale.
class ConflictError : public Error {
public:
    using Error::Error;
};

/// Stored bytes no longer match their recorded version tag.
class CorruptError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

struct Violation {
    std::string subject;  // offending element id
    std::string rule;
    std::string message;

    bool operator==(const Violation&) const = default;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Non-fatal finding recorded during ingestion, extraction, or derivation.
struct Diagnostic {
    enum class Severity { info, warning, error };
    Severity severity = Severity::warning;
    std::string code;
    std::string subject;
    std::string message;
};

}  // namespace timeflow
