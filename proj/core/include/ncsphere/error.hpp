#pragma once

#include <stdexcept>
#include <string>

namespace ncs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Leg frames (arities, colors, tuple lengths) do not line up.
struct FrameError : Error {
    using Error::Error;
};

// An operation was applied outside the partition class it requires.
struct ClassError : Error {
    using Error::Error;
};

struct SizeError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct SingularError : Error {
    SingularError(int n, int k)
        : Error("singular Gram matrix at N=" + std::to_string(n) + ", k=" + std::to_string(k)),
          N(n), k(k) {}
    int N;
    int k;
};

}  // namespace ncs
