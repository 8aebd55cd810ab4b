// Recursive-descent parser for complex-valued symbol expressions.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := number | 'x' | 'theta' | 'i' | func '(' expr ')' | '(' expr ')'
//   func   in {sin, cos, exp, abs, sqrt, re, im}
//
// Whitespace insensitive. Parse errors carry the 0-based column and the set
// of tokens that would have been accepted there.
#pragma once

#include "gltlab/symbol.hpp"

#include <cctype>
#include <complex>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gltlab {

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t column, std::string found, std::vector<std::string> expected)
        : std::runtime_error(format(column, found, expected)),
          column_(column),
          found_(std::move(found)),
          expected_(std::move(expected)) {}

    std::size_t column() const { return column_; }
    const std::string& found() const { return found_; }
    const std::vector<std::string>& expected() const { return expected_; }

  private:
    static std::string format(std::size_t column, const std::string& found,
                              const std::vector<std::string>& expected) {
        std::ostringstream os;
        os << "syntax error at column " << column << ": got " << found << ", expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? " | " : "") << expected[i];
        return os.str();
    }

    std::size_t column_;
    std::string found_;
    std::vector<std::string> expected_;
};

namespace expr {

using Value = std::complex<double>;

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Number, VarX, VarTheta, ImaginaryUnit, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    double number = 0.0;       // Number
    int exponent = 0;          // Pow
    std::string function;      // Call
    NodePtr lhs, rhs;          // binary ops; Call/Pow use lhs only

    Value eval(double x, double theta) const {
        switch (kind) {
            case Kind::Number: return Value{number, 0.0};
            case Kind::VarX: return Value{x, 0.0};
            case Kind::VarTheta: return Value{theta, 0.0};
            case Kind::ImaginaryUnit: return Value{0.0, 1.0};
            case Kind::Add: return lhs->eval(x, theta) + rhs->eval(x, theta);
            case Kind::Sub: return lhs->eval(x, theta) - rhs->eval(x, theta);
            case Kind::Mul: return lhs->eval(x, theta) * rhs->eval(x, theta);
            case Kind::Div: return lhs->eval(x, theta) / rhs->eval(x, theta);
            case Kind::Pow: {
                Value base = lhs->eval(x, theta);
                Value acc{1.0, 0.0};
                for (int k = 0; k < exponent; ++k) acc *= base;
                return acc;
            }
            case Kind::Call: {
                const Value v = lhs->eval(x, theta);
                if (function == "sin") return std::sin(v);
                if (function == "cos") return std::cos(v);
                if (function == "exp") return std::exp(v);
                if (function == "abs") return Value{std::abs(v), 0.0};
                if (function == "sqrt") return std::sqrt(v);
                if (function == "re") return Value{v.real(), 0.0};
                return Value{v.imag(), 0.0};  // im
            }
        }
        return Value{0.0, 0.0};
    }

    bool uses(Kind var) const {
        if (kind == var) return true;
        if (lhs && lhs->uses(var)) return true;
        return rhs && rhs->uses(var);
    }
};

class Parser {
  public:
    explicit Parser(std::string text) : text_(std::move(text)) {}

    NodePtr parse() {
        NodePtr root = parse_expr();
        skip_space();
        if (pos_ < text_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        return root;
    }

  private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        const std::string found =
            pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : std::string("end of input");
        throw ParseError(pos_, found, std::move(expected));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr node = parse_term();
        for (;;) {
            if (accept('+'))
                node = binary(Node::Kind::Add, node, parse_term());
            else if (accept('-'))
                node = binary(Node::Kind::Sub, node, parse_term());
            else
                return node;
        }
    }

    NodePtr parse_term() {
        NodePtr node = parse_factor();
        for (;;) {
            if (accept('*'))
                node = binary(Node::Kind::Mul, node, parse_factor());
            else if (accept('/'))
                node = binary(Node::Kind::Div, node, parse_factor());
            else
                return node;
        }
    }

    NodePtr parse_factor() {
        NodePtr base = parse_atom();
        if (accept('^')) {
            skip_space();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == start) fail({"integer"});
            auto node = std::make_shared<Node>();
            node->kind = Node::Kind::Pow;
            node->exponent = std::stoi(text_.substr(start, pos_ - start));
            node->lhs = base;
            return node;
        }
        return base;
    }

    NodePtr parse_atom() {
        skip_space();
        if (pos_ >= text_.size()) fail({"number", "'x'", "'theta'", "'i'", "function", "'('"});
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            if (!accept(')')) fail({"')'"});
            return inner;
        }
        fail({"number", "'x'", "'theta'", "'i'", "function", "'('"});
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // the 'e' belongs to an identifier, not this literal
            }
        }
        auto node = std::make_shared<Node>();
        node->kind = Node::Kind::Number;
        node->number = std::stod(text_.substr(start, pos_ - start));
        return node;
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string name = text_.substr(start, pos_ - start);
        auto node = std::make_shared<Node>();
        if (name == "x") {
            node->kind = Node::Kind::VarX;
            return node;
        }
        if (name == "theta") {
            node->kind = Node::Kind::VarTheta;
            return node;
        }
        if (name == "i") {
            node->kind = Node::Kind::ImaginaryUnit;
            return node;
        }
        if (name == "sin" || name == "cos" || name == "exp" || name == "abs" || name == "sqrt" || name == "re" ||
            name == "im") {
            if (!accept('(')) fail({"'('"});
            node->kind = Node::Kind::Call;
            node->function = name;
            node->lhs = parse_expr();
            if (!accept(')')) fail({"')'"});
            return node;
        }
        pos_ = start;
        throw ParseError(start, "'" + name + "'",
                         {"'x'", "'theta'", "'i'", "sin", "cos", "exp", "abs", "sqrt", "re", "im"});
    }

    static NodePtr binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    std::string text_;
    std::size_t pos_ = 0;
};

}  // namespace expr

struct ParsedExpression {
    expr::NodePtr root;
    std::string text;
    bool uses_x = false;
    bool uses_theta = false;
};

inline ParsedExpression parse_expression(const std::string& text) {
    expr::Parser parser(text);
    ParsedExpression parsed{parser.parse(), text, false, false};
    parsed.uses_x = parsed.root->uses(expr::Node::Kind::VarX);
    parsed.uses_theta = parsed.root->uses(expr::Node::Kind::VarTheta);
    return parsed;
}

inline SymbolFunction parse_symbol_expression(const std::string& text) {
    auto parsed = parse_expression(text);
    auto root = parsed.root;
    return SymbolFunction{[root](double x, double theta) { return root->eval(x, theta); }, text};
}

// Diagonal sampling functions live on [0, 1] only.
inline std::function<std::complex<double>(double)> parse_diag_expression(const std::string& text) {
    auto parsed = parse_expression(text);
    if (parsed.uses_theta)
        throw std::invalid_argument("diag expression must not reference theta: " + text);
    auto root = parsed.root;
    return [root](double x) { return root->eval(x, 0.0); };
}

}  // namespace gltlab
