#pragma once

#include <stdexcept>
#include <string>

// Exception taxonomy for the library. Every failure a caller can provoke
// through the public API derives from bistctl::Error and carries a stable
// machine-readable code() alongside the human-readable what() message, so the
// CLI can emit structured errors without string matching.

namespace bistctl {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* code() const noexcept { return "Error"; }
};

// An argument fell outside the mathematical domain of the operation
// (e.g. a proportion outside [0,1]).
class DomainError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "DomainError"; }
};

// A parameter pack violated its range or consistency invariants at
// construction time.
class InvalidParams : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "InvalidParams"; }
};

// The unstable zero theta of the reaction landed outside (0,1).
class ThetaOutOfRange : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "ThetaOutOfRange"; }
};

// The rational denominator of the infection kinetics has a root in [0,1].
// Unreachable for parameter packs that pass validation (see kinetics.cpp),
// kept as a hard guard.
class DenominatorVanishes : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "DenominatorVanishes"; }
};

// The potential satisfies F(1) <= 0: the infected state cannot invade and
// theta_c does not exist.
class NotInvadable : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "NotInvadable"; }
};

// A plateau level alpha <= theta_c was passed where an igniting plateau
// (alpha > theta_c) is required.
class AlphaBelowThreshold : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "AlphaBelowThreshold"; }
};

// Two ordered fractions were passed in the wrong order (alpha >= alpha_bar).
class OrderingError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "OrderingError"; }
};

// A prescribed release domain cannot contain the required plateau support.
class DomainTooSmall : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "DomainTooSmall"; }
};

// The explicit-reaction stability bound dt*(Lip f + mu) <= 0.5 failed.
class StabilityViolation : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "StabilityViolation"; }
};

// Too few samples to run a regression / estimate.
class InsufficientData : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "InsufficientData"; }
};

// A bisection bracket does not have the advertised verdicts at its ends.
class BadBracket : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "BadBracket"; }
};

// An intermediate verdict contradicted the monotone-threshold assumption.
class NonMonotone : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "NonMonotone"; }
};

// Two simulation results do not live on comparable grids / snapshot times.
class GridMismatch : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "GridMismatch"; }
};

// A configuration document failed to parse or validate; the message names
// the offending field.
class ConfigError : public Error {
public:
    using Error::Error;
    const char* code() const noexcept override { return "ConfigError"; }
};

} // namespace bistctl
