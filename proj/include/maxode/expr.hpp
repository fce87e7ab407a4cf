#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace maxode {

enum class UnaryOp { Neg, Exp, Log, Abs, Sqrt, Sin, Cos };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

/// Immutable scalar expression over time `t`, state components `x1..xm` and
/// running-max values `m1..mk`. Shared subtrees are reference counted, so
/// copies are cheap and safe to pass between threads.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(double value);   // finite only; v < 0 normalizes to Neg(Constant(-v))
    static Expr time();
    static Expr state(int index);         // 1-based
    static Expr max_value(int index);     // 1-based
    static Expr unary(UnaryOp op, Expr operand);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    /// Evaluate at time `t` with state vector `state` and running-max vector
    /// `maxima`. Throws EvalError on arithmetic domain violations instead of
    /// returning NaN.
    double eval(double t, std::span<const double> state, std::span<const double> maxima) const;

    /// Canonical fully parenthesized rendering; parse_expr(str()) rebuilds
    /// a structurally equal tree.
    std::string str() const;

    /// Structural equality (constants compared by value).
    bool operator==(const Expr& other) const;
    bool operator!=(const Expr& other) const { return !(*this == other); }

    int max_state_index() const;   // 0 when no state variable occurs
    int max_max_index() const;     // 0 when no max variable occurs
    bool references_time() const;
    bool references_max() const { return max_max_index() > 0; }

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// Parse an infix expression. Precedence: `^` (right associative) binds
/// tighter than unary minus, which binds tighter than `*` `/`, which bind
/// tighter than `+` `-`. Functions: exp, log, abs, sqrt, sin, cos.
/// Identifiers: t, x<digits>, m<digits> (indices start at 1).
Expr parse_expr(std::string_view text);

} // namespace maxode
