#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace irissr {

// Error type for all contract violations and I/O failures in this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

} // namespace irissr
