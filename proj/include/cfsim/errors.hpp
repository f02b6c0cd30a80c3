#pragma once

#include <stdexcept>
#include <string>

namespace cfsim {

// Error taxonomy shared across the library. Everything derives from Error so
// callers that only need run/abort semantics can catch one type; the harness
// catches specific kinds to turn solver failures into flagged results.
enum class ErrorCode {
    INVALID_DIMENSIONS,
    DIVERGENCE_TOO_LARGE,
    NO_CONVERGENCE,
    DT_UNDERFLOW,
    NEGATIVE_C,
    NEGATIVE_N,
    BLOWUP_SUSPECTED,
    PARSE_ERROR,
    VALIDATION_ERROR,
    IO_ERROR,
    FORMAT_ERROR,
    SCHEMA_ERROR,
    NOT_FOUND,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::INVALID_DIMENSIONS: return "INVALID_DIMENSIONS";
        case ErrorCode::DIVERGENCE_TOO_LARGE: return "DIVERGENCE_TOO_LARGE";
        case ErrorCode::NO_CONVERGENCE: return "NO_CONVERGENCE";
        case ErrorCode::DT_UNDERFLOW: return "DT_UNDERFLOW";
        case ErrorCode::NEGATIVE_C: return "NEGATIVE_C";
        case ErrorCode::NEGATIVE_N: return "NEGATIVE_N";
        case ErrorCode::BLOWUP_SUSPECTED: return "BLOWUP_SUSPECTED";
        case ErrorCode::PARSE_ERROR: return "PARSE_ERROR";
        case ErrorCode::VALIDATION_ERROR: return "VALIDATION_ERROR";
        case ErrorCode::IO_ERROR: return "IO_ERROR";
        case ErrorCode::FORMAT_ERROR: return "FORMAT_ERROR";
        case ErrorCode::SCHEMA_ERROR: return "SCHEMA_ERROR";
        case ErrorCode::NOT_FOUND: return "NOT_FOUND";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct NoConvergenceError : Error {
    NoConvergenceError(int iterations, double residual, const std::string& ctx)
        : Error(ErrorCode::NO_CONVERGENCE,
                ctx + " (iterations=" + std::to_string(iterations) +
                    ", residual=" + std::to_string(residual) + ")"),
          iterations(iterations),
          residual(residual) {}
    int iterations;
    double residual;
};

}  // namespace cfsim
