#pragma once

#include <stdexcept>

namespace percolab {

// Bad arguments or a violated operation precondition.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An enumeration guard (ball size, brute-force window width) was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query past the truncation horizon of a rooted graph.
struct HorizonError : std::logic_error {
    using std::logic_error::logic_error;
};

// A pattern library changed when its scan radius was doubled.
struct UnstableLibraryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace percolab
