#pragma once

#include <stdexcept>
#include <string>

namespace hatcheck {

/// Malformed edge-list input. `kind` names which rule was broken.
class ParseError : public std::runtime_error {
public:
    enum class Kind { Malformed, VertexOutOfRange, SelfLoop, DuplicateEdge };

    ParseError(Kind kind, std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// An instance exceeds one of the configurable size guards.
class GuardExceeded : public std::runtime_error {
public:
    GuardExceeded(const std::string& guard, const std::string& what)
        : std::runtime_error(guard + ": " + what), guard_(guard) {}

    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

/// A caller-asserted premise (e.g. HG(H) <= l) turned out false.
/// `witness` is a machine-checkable certificate, usually a serialized
/// winning strategy for the players.
class PremiseViolation : public std::runtime_error {
public:
    PremiseViolation(const std::string& what, std::string witness)
        : std::runtime_error(what), witness_(std::move(witness)) {}

    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

/// Structural precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace hatcheck
