#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace shorttopics {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or command-line usage (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

/// Non-fatal diagnostics collected by operations that may degrade gracefully.
struct Warnings {
    std::vector<std::string> messages;

    void add(std::string message) { messages.push_back(std::move(message)); }
    bool empty() const noexcept { return messages.empty(); }
    std::size_t size() const noexcept { return messages.size(); }
};

inline void warn(Warnings* sink, std::string message) {
    if (sink != nullptr) {
        sink->add(std::move(message));
    }
}

} // namespace shorttopics
