#pragma once

#include <stdexcept>
#include <string>

namespace mrf {

// Malformed or inconsistent external input (files, configs, datasets).
// The CLI maps this to exit code 2; logic errors map to exit code 3.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mrf
