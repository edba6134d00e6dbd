#include "gsqp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace gsqp {

namespace {

struct Num;
struct Var;
struct Bin;
struct Neg;
struct Fun;

Expr::Ptr make_num(double v);
Expr::Ptr make_bin(char op, Expr::Ptr l, Expr::Ptr r);
Expr::Ptr make_neg(Expr::Ptr e);
Expr::Ptr make_fun(const std::string& name, Expr::Ptr arg);

bool is_const(const Expr::Ptr& e, double* out = nullptr);

struct Num final : Expr {
    double v;
    explicit Num(double value) : v(value) {}
    double eval(const Vec&) const override { return v; }
    Ptr diff(int) const override { return make_num(0.0); }
    std::string str() const override {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    int max_var() const override { return 0; }
};

struct Var final : Expr {
    int idx;  // 0-based
    explicit Var(int i) : idx(i) {}
    double eval(const Vec& x) const override {
        if (idx >= static_cast<int>(x.size())) throw Error("expression references x" + std::to_string(idx + 1) + " beyond dimension");
        return x[idx];
    }
    Ptr diff(int var) const override { return make_num(var == idx ? 1.0 : 0.0); }
    std::string str() const override { return "x" + std::to_string(idx + 1); }
    int max_var() const override { return idx + 1; }
};

struct Bin final : Expr {
    char op;
    Ptr l, r;
    Bin(char o, Ptr lhs, Ptr rhs) : op(o), l(std::move(lhs)), r(std::move(rhs)) {}
    double eval(const Vec& x) const override {
        const double a = l->eval(x), b = r->eval(x);
        switch (op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            case '/': return a / b;
            case '^': return std::pow(a, b);
        }
        throw Error("bad operator");
    }
    Ptr diff(int var) const override {
        switch (op) {
            case '+': return make_bin('+', l->diff(var), r->diff(var));
            case '-': return make_bin('-', l->diff(var), r->diff(var));
            case '*':
                return make_bin('+', make_bin('*', l->diff(var), r),
                                make_bin('*', l, r->diff(var)));
            case '/':
                return make_bin('/', make_bin('-', make_bin('*', l->diff(var), r),
                                              make_bin('*', l, r->diff(var))),
                                make_bin('*', r, r));
            case '^': {
                double c;
                if (is_const(r, &c)) {
                    // d(u^c) = c*u^(c-1)*u'
                    return make_bin('*', make_bin('*', make_num(c), make_bin('^', l, make_num(c - 1.0))),
                                    l->diff(var));
                }
                // u^v = exp(v log u):  (u^v)' = u^v (v' log u + v u'/u)
                Ptr t1 = make_bin('*', r->diff(var), make_fun("log", l));
                Ptr t2 = make_bin('/', make_bin('*', r, l->diff(var)), l);
                return make_bin('*', make_bin('^', l, r), make_bin('+', t1, t2));
            }
        }
        throw Error("bad operator");
    }
    std::string str() const override { return "(" + l->str() + std::string(1, op) + r->str() + ")"; }
    int max_var() const override { return std::max(l->max_var(), r->max_var()); }
};

struct Neg final : Expr {
    Ptr e;
    explicit Neg(Ptr inner) : e(std::move(inner)) {}
    double eval(const Vec& x) const override { return -e->eval(x); }
    Ptr diff(int var) const override { return make_neg(e->diff(var)); }
    std::string str() const override { return "(-" + e->str() + ")"; }
    int max_var() const override { return e->max_var(); }
};

struct Fun final : Expr {
    std::string name;
    Ptr arg;
    Fun(std::string fn, Ptr a) : name(std::move(fn)), arg(std::move(a)) {}
    double eval(const Vec& x) const override {
        const double a = arg->eval(x);
        if (name == "exp") return std::exp(a);
        if (name == "log") return std::log(a);
        if (name == "sin") return std::sin(a);
        if (name == "cos") return std::cos(a);
        throw Error("unknown function " + name);
    }
    Ptr diff(int var) const override {
        Ptr da = arg->diff(var);
        Ptr outer;
        if (name == "exp") outer = make_fun("exp", arg);
        else if (name == "log") outer = make_bin('/', make_num(1.0), arg);
        else if (name == "sin") outer = make_fun("cos", arg);
        else if (name == "cos") outer = make_neg(make_fun("sin", arg));
        else throw Error("unknown function " + name);
        return make_bin('*', outer, da);
    }
    std::string str() const override { return name + "(" + arg->str() + ")"; }
    int max_var() const override { return arg->max_var(); }
};

bool is_const(const Expr::Ptr& e, double* out) {
    if (auto n = dynamic_cast<const Num*>(e.get())) {
        if (out) *out = n->v;
        return true;
    }
    return false;
}

Expr::Ptr make_num(double v) { return std::make_shared<Num>(v); }

Expr::Ptr make_bin(char op, Expr::Ptr l, Expr::Ptr r) {
    return std::make_shared<Bin>(op, std::move(l), std::move(r));
}

Expr::Ptr make_neg(Expr::Ptr e) { return std::make_shared<Neg>(std::move(e)); }

Expr::Ptr make_fun(const std::string& name, Expr::Ptr arg) {
    return std::make_shared<Fun>(name, std::move(arg));
}

// ---- recursive-descent parser ----

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at position " + std::to_string(pos) + " in '" + s + "'");
    }
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr::Ptr parse() {
        Expr::Ptr e = expr();
        skip_ws();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    Expr::Ptr expr() {
        Expr::Ptr e = term();
        for (;;) {
            if (accept('+')) e = make_bin('+', e, term());
            else if (accept('-')) e = make_bin('-', e, term());
            else return e;
        }
    }
    Expr::Ptr term() {
        Expr::Ptr e = factor();
        for (;;) {
            if (accept('*')) e = make_bin('*', e, factor());
            else if (accept('/')) e = make_bin('/', e, factor());
            else return e;
        }
    }
    Expr::Ptr factor() {
        if (accept('-')) return make_neg(factor());
        if (accept('+')) return factor();
        return power();
    }
    Expr::Ptr power() {
        Expr::Ptr base = atom();
        if (accept('^')) return make_bin('^', base, factor());  // right associative
        return base;
    }
    Expr::Ptr atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (c == '(') {
            ++pos;
            Expr::Ptr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s.c_str() + pos, &end);
            if (end == s.c_str() + pos) fail("bad number");
            pos = static_cast<size_t>(end - s.c_str());
            return make_num(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
            std::string name = s.substr(start, pos - start);
            if (name.size() >= 2 && name[0] == 'x') {
                bool digits = true;
                for (size_t i = 1; i < name.size(); ++i)
                    if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
                if (digits) {
                    const int idx = std::atoi(name.c_str() + 1);
                    if (idx < 1) fail("variable index must be >= 1");
                    return std::make_shared<Var>(idx - 1);
                }
            }
            if (name == "exp" || name == "log" || name == "sin" || name == "cos") {
                expect('(');
                Expr::Ptr arg = expr();
                expect(')');
                return make_fun(name, arg);
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Expr::Ptr parse_expression(const std::string& text) {
    Parser p(text);
    return p.parse();
}

Expr::Ptr simplify(const Expr::Ptr& e) {
    if (auto b = dynamic_cast<const Bin*>(e.get())) {
        Expr::Ptr l = simplify(b->l), r = simplify(b->r);
        double lv = 0.0, rv = 0.0;
        const bool lc = is_const(l, &lv), rc = is_const(r, &rv);
        if (lc && rc) return make_num(Bin(b->op, l, r).eval({}));
        switch (b->op) {
            case '+':
                if (lc && lv == 0.0) return r;
                if (rc && rv == 0.0) return l;
                break;
            case '-':
                if (rc && rv == 0.0) return l;
                break;
            case '*':
                if ((lc && lv == 0.0) || (rc && rv == 0.0)) return make_num(0.0);
                if (lc && lv == 1.0) return r;
                if (rc && rv == 1.0) return l;
                break;
            case '/':
                if (lc && lv == 0.0) return make_num(0.0);
                if (rc && rv == 1.0) return l;
                break;
            case '^':
                if (rc && rv == 1.0) return l;
                if (rc && rv == 0.0) return make_num(1.0);
                break;
        }
        return make_bin(b->op, l, r);
    }
    if (auto n = dynamic_cast<const Neg*>(e.get())) {
        Expr::Ptr inner = simplify(n->e);
        double v;
        if (is_const(inner, &v)) return make_num(-v);
        return make_neg(inner);
    }
    if (auto f = dynamic_cast<const Fun*>(e.get())) {
        Expr::Ptr arg = simplify(f->arg);
        double v;
        if (is_const(arg, &v)) return make_num(Fun(f->name, arg).eval({}));
        return make_fun(f->name, arg);
    }
    return e;
}

}  // namespace gsqp
