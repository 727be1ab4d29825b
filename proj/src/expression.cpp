#include "gsmoment/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "gsmoment/error.hpp"

namespace gsm {

struct Expression::Node {
    enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Ln, Exp, Sqrt, Lgamma, Abs };
    Op op = Op::Const;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double p) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Var: return p;
            case Op::Neg: return -lhs->eval(p);
            case Op::Add: return lhs->eval(p) + rhs->eval(p);
            case Op::Sub: return lhs->eval(p) - rhs->eval(p);
            case Op::Mul: return lhs->eval(p) * rhs->eval(p);
            case Op::Div: return lhs->eval(p) / rhs->eval(p);
            case Op::Pow: return std::pow(lhs->eval(p), rhs->eval(p));
            case Op::Ln: return std::log(lhs->eval(p));
            case Op::Exp: return std::exp(lhs->eval(p));
            case Op::Sqrt: return std::sqrt(lhs->eval(p));
            case Op::Lgamma: return std::lgamma(lhs->eval(p));
            case Op::Abs: return std::fabs(lhs->eval(p));
        }
        return std::nan("");
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::ParseError, "expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Op::Add, n, term());
            else if (accept('-')) n = make(Op::Sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Op::Mul, n, unary());
            else if (accept('/')) n = make(Op::Div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Op::Const, nullptr, nullptr, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "p") return make(Op::Var);
            if (name == "pi") return make(Op::Const, nullptr, nullptr, std::numbers::pi);
            if (name == "e") return make(Op::Const, nullptr, nullptr, std::numbers::e);
            Op op;
            if (name == "ln" || name == "log") op = Op::Ln;
            else if (name == "exp") op = Op::Exp;
            else if (name == "sqrt") op = Op::Sqrt;
            else if (name == "lgamma") op = Op::Lgamma;
            else if (name == "abs") op = Op::Abs;
            else fail("unknown identifier '" + name + "'");
            if (!accept('(')) fail("expected '(' after " + name);
            NodePtr arg = expr();
            if (!accept(')')) fail("expected ')'");
            return make(op, arg);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

Expression Expression::parse(const std::string& source) {
    Expression e;
    e.source_ = source;
    e.root_ = Parser(source).run();
    return e;
}

double Expression::operator()(double p) const { return root_->eval(p); }

}  // namespace gsm
