#pragma once

#include <stdexcept>
#include <string>

namespace defectscan {

/// Raised for every contract violation and I/O failure in the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace defectscan
