#pragma once

#include <stdexcept>
#include <string>

namespace tacsel {

// Configuration / validation problems; CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Runtime / data problems; CLI maps these to exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoContactError : DataError {
    explicit NoContactError(const std::string& msg) : DataError(msg) {}
};

struct DegenerateWindowError : DataError {
    explicit DegenerateWindowError(const std::string& msg) : DataError(msg) {}
};

struct InsufficientPoolError : DataError {
    explicit InsufficientPoolError(const std::string& msg) : DataError(msg) {}
};

}  // namespace tacsel
