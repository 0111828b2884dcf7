#pragma once

#include <stdexcept>
#include <string>

namespace subrad {

// bad input file / config document; CLI maps this to exit code 1
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// density matrix or amplitude vector violating a state invariant
struct InvalidState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// state outside what a backend can propagate
struct UnsupportedState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// emitter placed outside a field profile's domain
struct FieldDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace subrad
