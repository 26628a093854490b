#pragma once

#include <stdexcept>
#include <string>

namespace vulncast {

// Error categories map onto CLI exit codes (config=2, data=3, model=4).
// Messages start with the short error token ("malformed-id: ...") so callers
// and tests can match on it.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

class ModelError : public Error {
public:
    explicit ModelError(const std::string& msg) : Error(msg) {}
};

} // namespace vulncast
