#include "phasereg/errors.hpp"

#include <atomic>
#include <iostream>

namespace phasereg {

namespace {
std::atomic<bool> g_warnings{true};
}

void warn(const std::string& message) {
    if (g_warnings.load())
        std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

} // namespace phasereg
