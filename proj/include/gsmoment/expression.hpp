#pragma once

// Arithmetic expressions in one variable `p`, used by the `expr` sequence
// generator (an expression for log M_p). Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'p' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//   func   := ln | log | exp | sqrt | lgamma | abs
// `log` is the natural logarithm.

#include <memory>
#include <string>

namespace gsm {

class Expression {
public:
    // Throws Error(ParseError) on malformed input.
    static Expression parse(const std::string& source);

    double operator()(double p) const;
    const std::string& source() const noexcept { return source_; }

    struct Node;

private:
    std::string source_;
    std::shared_ptr<const Node> root_;
};

}  // namespace gsm
