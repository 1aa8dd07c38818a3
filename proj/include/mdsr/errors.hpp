#pragma once

#include <stdexcept>

namespace mdsr {

// Invalid or inconsistent run configuration (bad key, violated invariant).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure in the steady-state solve (singular Liouvillian,
// non-physical density matrix).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem failure while writing results.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mdsr
