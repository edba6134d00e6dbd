#pragma once

#include <memory>
#include <string>

#include "gsqp/linalg.hpp"

namespace gsqp {

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Immutable arithmetic expression over variables x1..xn.
/// Grammar: + - * / ^, unary -, exp, log, sin, cos, numeric literals.
class Expr {
  public:
    using Ptr = std::shared_ptr<const Expr>;

    virtual ~Expr() = default;
    virtual double eval(const Vec& x) const = 0;
    virtual Ptr diff(int var) const = 0;
    virtual std::string str() const = 0;
    /// Largest 1-based variable index referenced (0 if constant).
    virtual int max_var() const = 0;
};

/// Parse an expression; variables written x1, x2, ... Throws ParseError.
Expr::Ptr parse_expression(const std::string& text);

/// Constant-fold / identity-simplify (0*x, x+0, x^1, ...).
Expr::Ptr simplify(const Expr::Ptr& e);

}  // namespace gsqp
