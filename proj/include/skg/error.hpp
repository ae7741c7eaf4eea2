#pragma once

#include <stdexcept>
#include <string>

namespace skg {

// Bad user input: CLI flags, query parameters, config values, merge preconditions.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A snapshot file that exists but cannot be decoded. The message names the
// file and, when known, the 1-based record line.
class LoadError : public IoError {
public:
    LoadError(const std::string& file, std::size_t line, const std::string& what)
        : IoError(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what) {}
};

}  // namespace skg
