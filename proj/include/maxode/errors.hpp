#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maxode {

/// Lexical or grammatical failure while parsing an expression.
/// `position()` is the 1-based character offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error("syntax error at position " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Arithmetic domain violation during evaluation (log of a nonpositive
/// value, division by zero, zero raised to a negative power, ...).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Problem-file or problem-spec violation; `field()` locates the offending
/// entry ("f[1]", "x0", ...).
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A solver produced a non-finite value; carries the first offending grid node.
class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(const std::string& message, int node)
        : std::runtime_error(message + " (node " + std::to_string(node) + ")"), node_(node) {}

    int node() const noexcept { return node_; }

private:
    int node_;
};

} // namespace maxode
