#pragma once

#include <stdexcept>

namespace cuecorr {

// Invalid caller-supplied value: bad argument, malformed config, violated
// precondition. Mapped to CLI exit code 2.
class argument_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented size/cost limit would be exceeded (enumeration, lattice box,
// grid budget). Mapped to CLI exit code 3.
class capacity_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical scheme could not certify its accuracy target (quadrature
// non-convergence, residue above bound). Mapped to CLI exit code 4.
class tolerance_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The value does not carry an optional ingredient the operation needs
// (e.g. a test function without a real-space evaluator). CLI exit code 2.
class unsupported_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant failed. Indicates a bug in this library, never bad
// user input; deliberately not given a dedicated CLI exit code.
class consistency_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace cuecorr
