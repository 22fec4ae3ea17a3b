#pragma once

#include <stdexcept>
#include <string>

namespace fourops {

/// Base class for all domain errors; `code` is a stable machine-readable tag
/// that the CLI emits in its JSON error envelope.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct InvalidRangeError : Error {
    explicit InvalidRangeError(const std::string& w) : Error("invalid-range", w) {}
};
struct TooFewPointsError : Error {
    explicit TooFewPointsError(const std::string& w) : Error("too-few-points", w) {}
};
struct UnsupportedOrderError : Error {
    explicit UnsupportedOrderError(const std::string& w) : Error("unsupported-order", w) {}
};
struct SchemeMismatchError : Error {
    explicit SchemeMismatchError(const std::string& w) : Error("scheme-grid-mismatch", w) {}
};
struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& w) : Error("grid-mismatch", w) {}
};
struct SolverFailureError : Error {
    explicit SolverFailureError(const std::string& w) : Error("solver-failure", w) {}
};
struct LinearDependenceError : Error {
    explicit LinearDependenceError(const std::string& w) : Error("linear-dependence", w) {}
};
struct WronskianVanishesError : Error {
    explicit WronskianVanishesError(const std::string& w) : Error("wronskian-vanishes", w) {}
};
struct IdentityViolationError : Error {
    explicit IdentityViolationError(const std::string& w) : Error("identity-violation", w) {}
};
struct NonintegrablePotentialError : Error {
    explicit NonintegrablePotentialError(const std::string& w)
        : Error("nonintegrable-potential", w) {}
};
struct InvalidKappaError : Error {
    explicit InvalidKappaError(const std::string& w) : Error("invalid-kappa", w) {}
};
struct BlowUpError : Error {
    explicit BlowUpError(const std::string& w) : Error("blow-up", w) {}
};
struct CflViolationError : Error {
    explicit CflViolationError(const std::string& w) : Error("cfl-violation", w) {}
};
struct UnknownExampleError : Error {
    explicit UnknownExampleError(const std::string& w) : Error("unknown-example", w) {}
};
struct MissingParameterError : Error {
    explicit MissingParameterError(const std::string& w) : Error("missing-k", w) {}
};
struct BadSpecError : Error {
    explicit BadSpecError(const std::string& w) : Error("bad-spec", w) {}
};

}  // namespace fourops
