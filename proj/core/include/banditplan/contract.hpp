#pragma once

#include <stdexcept>
#include <string>

namespace banditplan {

// Thrown when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool condition, const char* message) {
    if (!condition) throw ContractViolation(message);
}

}  // namespace banditplan
