#pragma once

#include <stdexcept>
#include <string>

namespace jmlm {

// Base error with a stable machine-readable category string. The CLI prints
// "<category>: <message>" on a single stderr line and maps categories to
// exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("config-error", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io-error", message) {}
};

class DataError : public Error {
public:
    DataError(const std::string& category, const std::string& message) : Error(category, message) {}
};

} // namespace jmlm
