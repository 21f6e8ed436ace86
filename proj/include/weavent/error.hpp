#pragma once

#include <stdexcept>
#include <string>

namespace weavent {

// Raised when a caller hands over a malformed or out-of-contract structure.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A structure that cannot be made live: some event occurs in no configuration.
class LivenessError : public InputError {
public:
    LivenessError(const std::string& event, const std::string& what)
        : InputError(what), event_(event) {}
    const std::string& event() const { return event_; }

private:
    std::string event_;
};

// Trace enumeration produced more classes than the configured ceiling.
class CeilingError : public std::runtime_error {
public:
    explicit CeilingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace weavent
