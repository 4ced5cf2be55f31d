#pragma once

#include <stdexcept>
#include <string>

namespace nlsc {

// Base class for all domain errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionUnsupported final : Error {
    explicit DimensionUnsupported(const std::string& w) : Error(w) {}
};

struct GridTooCoarse final : Error {
    explicit GridTooCoarse(const std::string& w) : Error(w) {}
};

struct CouplingOutOfRange final : Error {
    explicit CouplingOutOfRange(const std::string& w) : Error(w) {}
};

struct ExponentOutOfRange final : Error {
    explicit ExponentOutOfRange(const std::string& w) : Error(w) {}
};

struct RadiusOutOfRange final : Error {
    explicit RadiusOutOfRange(const std::string& w) : Error(w) {}
};

struct ShootingBracketFailed final : Error {
    explicit ShootingBracketFailed(const std::string& w) : Error(w) {}
};

struct NotConverged final : Error {
    explicit NotConverged(const std::string& w) : Error(w) {}
};

struct NotSquareIntegrable final : Error {
    explicit NotSquareIntegrable(const std::string& w) : Error(w) {}
};

struct ZeroField final : Error {
    explicit ZeroField(const std::string& w) : Error(w) {}
};

struct RegimeMismatch final : Error {
    explicit RegimeMismatch(const std::string& w) : Error(w) {}
};

struct ConstructionFailed final : Error {
    explicit ConstructionFailed(const std::string& w) : Error(w) {}
};

struct SolverSingular final : Error {
    explicit SolverSingular(const std::string& w) : Error(w) {}
};

struct SingularTime final : Error {
    explicit SingularTime(const std::string& w) : Error(w) {}
};

struct InvalidBump final : Error {
    explicit InvalidBump(const std::string& w) : Error(w) {}
};

struct TailNotResolved final : Error {
    explicit TailNotResolved(const std::string& w) : Error(w) {}
};

struct ConfigParseError final : Error {
    explicit ConfigParseError(const std::string& w) : Error(w) {}
};

struct SweepContradiction final : Error {
    explicit SweepContradiction(const std::string& w) : Error(w) {}
};

}  // namespace nlsc
