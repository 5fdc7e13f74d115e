#pragma once

#include <stdexcept>
#include <string>

namespace dscatter {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError       -> 2 (validation / configuration)
//   DivergenceError   -> 3 (numerical divergence, non-convergence)
//   PreconditionError -> 4 (precondition unsatisfiable, e.g. smallness scan cap)
// Plain NumericalError (non-finite data etc.) also maps to 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivergenceError : NumericalError {
    explicit DivergenceError(const std::string& msg) : NumericalError(msg) {}
};

struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitPrecondition = 4;

}  // namespace dscatter
