#include "maxode/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>

#include "maxode/errors.hpp"

namespace maxode {

namespace {

struct ConstantNode { double value; };
struct TimeNode {};
struct StateNode { int index; };
struct MaxNode { int index; };

} // namespace

struct Expr::Node {
    struct Unary {
        UnaryOp op;
        std::shared_ptr<const Node> operand;
    };
    struct Binary {
        BinaryOp op;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    std::variant<ConstantNode, TimeNode, StateNode, MaxNode, Unary, Binary> v;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_node(decltype(Expr::Node::v) v) {
    return std::make_shared<const Expr::Node>(Expr::Node{std::move(v)});
}

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Neg: return "-";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Log: return "log";
        case UnaryOp::Abs: return "abs";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
    }
    return "?";
}

char binary_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return '+';
        case BinaryOp::Sub: return '-';
        case BinaryOp::Mul: return '*';
        case BinaryOp::Div: return '/';
        case BinaryOp::Pow: return '^';
    }
    return '?';
}

// Shortest decimal rendering that round-trips to the same double.
std::string format_double(double value) {
    std::array<char, 40> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

double eval_node(const Expr::Node& node, double t, std::span<const double> state,
                 std::span<const double> maxima);

double eval_unary(UnaryOp op, double v) {
    switch (op) {
        case UnaryOp::Neg: return -v;
        case UnaryOp::Exp: return std::exp(v);
        case UnaryOp::Log:
            if (v <= 0.0) throw EvalError("log of nonpositive value " + format_double(v));
            return std::log(v);
        case UnaryOp::Abs: return std::fabs(v);
        case UnaryOp::Sqrt:
            if (v < 0.0) throw EvalError("sqrt of negative value " + format_double(v));
            return std::sqrt(v);
        case UnaryOp::Sin: return std::sin(v);
        case UnaryOp::Cos: return std::cos(v);
    }
    throw EvalError("unknown unary operator");
}

double eval_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0) throw EvalError("division by zero");
            return a / b;
        case BinaryOp::Pow:
            if (a == 0.0 && b < 0.0) throw EvalError("zero raised to a negative power");
            if (a < 0.0 && b != std::trunc(b))
                throw EvalError("negative base " + format_double(a) +
                                " raised to non-integer power " + format_double(b));
            return std::pow(a, b);
    }
    throw EvalError("unknown binary operator");
}

double eval_node(const Expr::Node& node, double t, std::span<const double> state,
                 std::span<const double> maxima) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstantNode>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, TimeNode>) {
                return t;
            } else if constexpr (std::is_same_v<T, StateNode>) {
                if (n.index > static_cast<int>(state.size()))
                    throw EvalError("state variable x" + std::to_string(n.index) +
                                    " out of range (dimension " + std::to_string(state.size()) + ")");
                return state[static_cast<std::size_t>(n.index - 1)];
            } else if constexpr (std::is_same_v<T, MaxNode>) {
                if (n.index > static_cast<int>(maxima.size()))
                    throw EvalError("max variable m" + std::to_string(n.index) +
                                    " out of range (count " + std::to_string(maxima.size()) + ")");
                return maxima[static_cast<std::size_t>(n.index - 1)];
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                return eval_unary(n.op, eval_node(*n.operand, t, state, maxima));
            } else {
                return eval_binary(n.op, eval_node(*n.lhs, t, state, maxima),
                                   eval_node(*n.rhs, t, state, maxima));
            }
        },
        node.v);
}

void print_node(const Expr::Node& node, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstantNode>) {
                out += format_double(n.value);
            } else if constexpr (std::is_same_v<T, TimeNode>) {
                out += 't';
            } else if constexpr (std::is_same_v<T, StateNode>) {
                out += 'x';
                out += std::to_string(n.index);
            } else if constexpr (std::is_same_v<T, MaxNode>) {
                out += 'm';
                out += std::to_string(n.index);
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                if (n.op == UnaryOp::Neg) {
                    out += "(-";
                    print_node(*n.operand, out);
                    out += ')';
                } else {
                    out += unary_name(n.op);
                    out += '(';
                    print_node(*n.operand, out);
                    out += ')';
                }
            } else {
                out += '(';
                print_node(*n.lhs, out);
                out += ' ';
                out += binary_symbol(n.op);
                out += ' ';
                print_node(*n.rhs, out);
                out += ')';
            }
        },
        node.v);
}

bool equal_nodes(const Expr::Node& a, const Expr::Node& b) {
    if (a.v.index() != b.v.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.v);
            if constexpr (std::is_same_v<T, ConstantNode>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, TimeNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, StateNode> || std::is_same_v<T, MaxNode>) {
                return na.index == nb.index;
            } else if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                return na.op == nb.op && equal_nodes(*na.operand, *nb.operand);
            } else {
                return na.op == nb.op && equal_nodes(*na.lhs, *nb.lhs) && equal_nodes(*na.rhs, *nb.rhs);
            }
        },
        a.v);
}

template <typename Fold>
int fold_indices(const Expr::Node& node, Fold&& pick) {
    return std::visit(
        [&](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Node::Unary>) {
                return fold_indices(*n.operand, pick);
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                return std::max(fold_indices(*n.lhs, pick), fold_indices(*n.rhs, pick));
            } else {
                return pick(n);
            }
        },
        node.v);
}

} // namespace

Expr::Expr() : node_(make_node(ConstantNode{0.0})) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("expression constants must be finite");
    if (value < 0.0) return unary(UnaryOp::Neg, constant(-value));
    if (value == 0.0) value = 0.0;  // normalize -0.0
    return Expr(make_node(ConstantNode{value}));
}

Expr Expr::time() { return Expr(make_node(TimeNode{})); }

Expr Expr::state(int index) {
    if (index < 1) throw std::invalid_argument("state variable index must be >= 1");
    return Expr(make_node(StateNode{index}));
}

Expr Expr::max_value(int index) {
    if (index < 1) throw std::invalid_argument("max variable index must be >= 1");
    return Expr(make_node(MaxNode{index}));
}

Expr Expr::unary(UnaryOp op, Expr operand) {
    return Expr(make_node(Node::Unary{op, std::move(operand.node_)}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    return Expr(make_node(Node::Binary{op, std::move(lhs.node_), std::move(rhs.node_)}));
}

double Expr::eval(double t, std::span<const double> state, std::span<const double> maxima) const {
    return eval_node(*node_, t, state, maxima);
}

std::string Expr::str() const {
    std::string out;
    print_node(*node_, out);
    return out;
}

bool Expr::operator==(const Expr& other) const { return equal_nodes(*node_, *other.node_); }

int Expr::max_state_index() const {
    return fold_indices(*node_, [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StateNode>) return n.index;
        return 0;
    });
}

int Expr::max_max_index() const {
    return fold_indices(*node_, [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MaxNode>) return n.index;
        return 0;
    });
}

bool Expr::references_time() const {
    return fold_indices(*node_, [](const auto& n) -> int {
               using T = std::decay_t<decltype(n)>;
               if constexpr (std::is_same_v<T, TimeNode>) return 1;
               return 0;
           }) > 0;
}

// ---------------------------------------------------------------------------
// Parser: hand-rolled recursive descent over a small token stream.

namespace {

struct Token {
    enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Kind kind;
    std::size_t pos;      // 1-based offset of the first character
    double number = 0.0;
    std::string ident;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < text_.size() && (text_[i_] == ' ' || text_[i_] == '\t' ||
                                     text_[i_] == '\n' || text_[i_] == '\r'))
            ++i_;
        std::size_t pos = i_ + 1;
        if (i_ >= text_.size()) {
            current_ = Token{Token::Kind::End, pos};
            return;
        }
        char c = text_[i_];
        switch (c) {
            case '+': ++i_; current_ = Token{Token::Kind::Plus, pos}; return;
            case '-': ++i_; current_ = Token{Token::Kind::Minus, pos}; return;
            case '*': ++i_; current_ = Token{Token::Kind::Star, pos}; return;
            case '/': ++i_; current_ = Token{Token::Kind::Slash, pos}; return;
            case '^': ++i_; current_ = Token{Token::Kind::Caret, pos}; return;
            case '(': ++i_; current_ = Token{Token::Kind::LParen, pos}; return;
            case ')': ++i_; current_ = Token{Token::Kind::RParen, pos}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number(pos);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
                ++i_;
            current_ = Token{Token::Kind::Ident, pos, 0.0,
                             std::string(text_.substr(start, i_ - start))};
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    void lex_number(std::size_t pos) {
        std::size_t start = i_;
        while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
        if (i_ < text_.size() && text_[i_] == '.') {
            ++i_;
            if (i_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[i_])))
                throw ParseError("malformed number: digit expected after '.'", i_ + 1);
            while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
        }
        if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
            std::size_t mark = i_;
            ++i_;
            if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) ++i_;
            if (i_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[i_]))) {
                i_ = mark;  // not an exponent; leave 'e...' for the ident lexer to reject later
            } else {
                while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) ++i_;
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + i_, value);
        if (res.ec != std::errc{} || res.ptr != text_.data() + i_)
            throw ParseError("malformed number", pos);
        current_ = Token{Token::Kind::Number, pos, value};
    }

    std::string_view text_;
    std::size_t i_ = 0;
    Token current_;
};

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : lex_(text) {}

    Expr parse() {
        Expr e = parse_sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw ParseError("unexpected trailing input", t.pos);
        return e;
    }

private:
    // sum  := term (('+'|'-') term)*
    Expr parse_sum() {
        Expr lhs = parse_term();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Plus) {
                lex_.take();
                lhs = Expr::binary(BinaryOp::Add, std::move(lhs), parse_term());
            } else if (t.kind == Token::Kind::Minus) {
                lex_.take();
                lhs = Expr::binary(BinaryOp::Sub, std::move(lhs), parse_term());
            } else {
                return lhs;
            }
        }
    }

    // term := factor (('*'|'/') factor)*
    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::Star) {
                lex_.take();
                lhs = Expr::binary(BinaryOp::Mul, std::move(lhs), parse_factor());
            } else if (t.kind == Token::Kind::Slash) {
                lex_.take();
                lhs = Expr::binary(BinaryOp::Div, std::move(lhs), parse_factor());
            } else {
                return lhs;
            }
        }
    }

    // factor := '-' factor | power      (so '^' binds tighter than unary minus)
    Expr parse_factor() {
        if (lex_.peek().kind == Token::Kind::Minus) {
            lex_.take();
            return Expr::unary(UnaryOp::Neg, parse_factor());
        }
        return parse_power();
    }

    // power := primary ('^' factor)?    (right associative; exponent may be signed)
    Expr parse_power() {
        Expr base = parse_primary();
        if (lex_.peek().kind == Token::Kind::Caret) {
            lex_.take();
            return Expr::binary(BinaryOp::Pow, std::move(base), parse_factor());
        }
        return base;
    }

    Expr parse_primary() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number:
                return Expr::constant(t.number);
            case Token::Kind::LParen: {
                Expr e = parse_sum();
                expect_rparen();
                return e;
            }
            case Token::Kind::Ident:
                return parse_ident(t);
            case Token::Kind::End:
                throw ParseError("unexpected end of input", t.pos);
            default:
                throw ParseError("expected a number, identifier or '('", t.pos);
        }
    }

    Expr parse_ident(const Token& t) {
        if (lex_.peek().kind == Token::Kind::LParen) {
            UnaryOp op;
            if (t.ident == "exp") op = UnaryOp::Exp;
            else if (t.ident == "log") op = UnaryOp::Log;
            else if (t.ident == "abs") op = UnaryOp::Abs;
            else if (t.ident == "sqrt") op = UnaryOp::Sqrt;
            else if (t.ident == "sin") op = UnaryOp::Sin;
            else if (t.ident == "cos") op = UnaryOp::Cos;
            else throw ParseError("unknown function '" + t.ident + "'", t.pos);
            lex_.take();  // '('
            Expr arg = parse_sum();
            expect_rparen();
            return Expr::unary(op, std::move(arg));
        }
        if (t.ident == "t") return Expr::time();
        if ((t.ident[0] == 'x' || t.ident[0] == 'm') && t.ident.size() > 1) {
            int index = parse_index(t);
            if (t.ident[0] == 'x') return Expr::state(index);
            return Expr::max_value(index);
        }
        throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
    }

    int parse_index(const Token& t) {
        std::string_view digits = std::string_view(t.ident).substr(1);
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
        if (digits.size() > 6)
            throw ParseError("malformed index in '" + t.ident + "'", t.pos);
        int index = 0;
        std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (index == 0)
            throw ParseError("variable index must be >= 1 in '" + t.ident + "'", t.pos);
        return index;
    }

    void expect_rparen() {
        Token t = lex_.take();
        if (t.kind != Token::Kind::RParen)
            throw ParseError("expected ')'", t.pos);
    }

    Lexer lex_;
};

} // namespace

Expr parse_expr(std::string_view text) {
    if (text.empty()) throw ParseError("empty expression", 1);
    return ExprParser(text).parse();
}

} // namespace maxode
