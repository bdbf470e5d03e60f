#pragma once

#include <stdexcept>
#include <string>

namespace phasereg {

// Bad shapes, non-positive data, malformed files. CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Solver or bound failure on otherwise valid input. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

void warn(const std::string& message);
void set_warnings_enabled(bool enabled);

} // namespace phasereg
