#pragma once

// Parser and canonical printer for polynomial/series expressions.
//
// Grammar (whitespace insensitive):
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' nat)?
//   base   := nat | 'i' | ident | '(' expr ')'
// Division is only by expressions that evaluate to a nonzero rational
// constant. Exponents are literal non-negative integers. Identifiers are
// validated against the caller's variable set plus the builtins i and hbar.

#include "micromorph/scalar.hpp"
#include "micromorph/series.hpp"
#include "micromorph/varset.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace micromorph {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct ExprAst {
    enum class Kind { number, imag_unit, variable, add, sub, mul, div, pow, neg };
    Kind kind{Kind::number};
    Scalar value;               // number
    std::string name;           // variable
    unsigned exponent{0};       // pow
    std::vector<ExprAst> kids;

    static ExprAst number(Scalar v) {
        ExprAst a;
        a.kind = Kind::number;
        a.value = std::move(v);
        return a;
    }
    static ExprAst variable(std::string n) {
        ExprAst a;
        a.kind = Kind::variable;
        a.name = std::move(n);
        return a;
    }
    static ExprAst node(Kind k, std::vector<ExprAst> kids) {
        ExprAst a;
        a.kind = k;
        a.kids = std::move(kids);
        return a;
    }
};

namespace detail {

struct Token {
    enum class Type { number, ident, op, end } type{Type::end};
    std::string text;
    BigInt num;
    int line{1}, col{1};
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            bump();
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.type = Token::Type::end;
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits += text_[pos_];
                bump();
            }
            tok_.type = Token::Type::number;
            tok_.text = digits;
            tok_.num = BigInt(digits);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string id;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                id += text_[pos_];
                bump();
            }
            tok_.type = Token::Type::ident;
            tok_.text = id;
            return;
        }
        tok_.type = Token::Type::op;
        tok_.text = std::string(1, c);
        bump();
    }
    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_{0};
    int line_{1}, col_{1};
    Token tok_;
};

class Parser {
  public:
    Parser(const std::string& text, const VarSet& vars, bool allow_hbar)
        : lex_(text), vars_(vars), allow_hbar_(allow_hbar) {}

    ExprAst parse() {
        ExprAst e = expr();
        const auto& t = lex_.peek();
        if (t.type != detail::Token::Type::end)
            fail(t, "unexpected trailing input '" + t.text + "'");
        return e;
    }

  private:
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw ParseError(t.line, t.col, msg);
    }
    bool is_op(const char* s) const {
        return lex_.peek().type == Token::Type::op && lex_.peek().text == s;
    }

    ExprAst expr() {
        bool neg = false;
        if (is_op("-")) {
            lex_.take();
            neg = true;
        }
        ExprAst acc = term();
        if (neg)
            acc = ExprAst::node(ExprAst::Kind::neg, {std::move(acc)});
        while (is_op("+") || is_op("-")) {
            bool plus = is_op("+");
            lex_.take();
            ExprAst rhs = term();
            acc = ExprAst::node(plus ? ExprAst::Kind::add : ExprAst::Kind::sub,
                                {std::move(acc), std::move(rhs)});
        }
        return acc;
    }

    ExprAst term() {
        ExprAst acc = factor();
        while (is_op("*") || is_op("/")) {
            bool mul = is_op("*");
            lex_.take();
            ExprAst rhs = factor();
            acc = ExprAst::node(mul ? ExprAst::Kind::mul : ExprAst::Kind::div,
                                {std::move(acc), std::move(rhs)});
        }
        return acc;
    }

    ExprAst factor() {
        ExprAst b = base();
        if (is_op("^")) {
            Token caret = lex_.take();
            const Token& t = lex_.peek();
            if (t.type != Token::Type::number)
                fail(caret, "exponent must be a non-negative integer literal");
            Token n = lex_.take();
            ExprAst p = ExprAst::node(ExprAst::Kind::pow, {std::move(b)});
            if (n.num > BigInt(1000))
                fail(n, "exponent too large");
            p.exponent = static_cast<unsigned>(n.num.convert_to<long>());
            return p;
        }
        return b;
    }

    ExprAst base() {
        const Token& t = lex_.peek();
        switch (t.type) {
            case Token::Type::number: {
                Token n = lex_.take();
                return ExprAst::number(Scalar(Rational(n.num)));
            }
            case Token::Type::ident: {
                Token id = lex_.take();
                if (id.text == "i")
                    return ExprAst::node(ExprAst::Kind::imag_unit, {});
                if (id.text == "hbar") {
                    if (!allow_hbar_)
                        fail(id, "hbar is not allowed in this context");
                    return ExprAst::variable("hbar");
                }
                if (!vars_.contains(id.text))
                    fail(id, "unknown identifier '" + id.text + "'");
                return ExprAst::variable(id.text);
            }
            case Token::Type::op:
                if (t.text == "(") {
                    lex_.take();
                    ExprAst e = expr();
                    if (!is_op(")"))
                        fail(lex_.peek(), "expected ')'");
                    lex_.take();
                    return e;
                }
                fail(t, "unexpected '" + t.text + "'");
            default:
                fail(t, "unexpected end of input");
        }
    }

    Lexer lex_;
    const VarSet& vars_;
    bool allow_hbar_;
};

}  // namespace detail

inline ExprAst parse(const std::string& text, const VarSet& vars, bool allow_hbar = true) {
    return detail::Parser(text, vars, allow_hbar).parse();
}

struct Lowered {
    bool has_hbar{false};
    FormalSeries series;      // when !has_hbar
    HbarSeries hbar_series;   // when has_hbar
    std::vector<std::string> warnings;
};

// Expand the AST into a series over `vars` (plus hbar when present),
// truncated by total degree. Degree overflow drops terms with a warning.
inline Lowered lower(const ExprAst& ast, int trunc, const VarSetPtr& vars, int hbar_order = 8) {
    auto ext = make_varset(
        concat(vars->vars(), std::vector<Var>{{"hbar", Role::hbar_external}}));
    const int cap = trunc + hbar_order;
    std::size_t hbar_idx = ext->index_of("hbar");

    struct Ev {
        const VarSetPtr& ext;
        int cap;
        std::vector<std::string>& warn;
        FormalSeries run(const ExprAst& a) {
            switch (a.kind) {
                case ExprAst::Kind::number:
                    return FormalSeries::constant(ext, cap, a.value);
                case ExprAst::Kind::imag_unit:
                    return FormalSeries::constant(ext, cap, Scalar::i());
                case ExprAst::Kind::variable:
                    return FormalSeries::var(ext, cap, a.name);
                case ExprAst::Kind::add:
                    return run(a.kids[0]) + run(a.kids[1]);
                case ExprAst::Kind::sub:
                    return run(a.kids[0]) - run(a.kids[1]);
                case ExprAst::Kind::neg:
                    return -run(a.kids[0]);
                case ExprAst::Kind::mul:
                    return run(a.kids[0]) * run(a.kids[1]);
                case ExprAst::Kind::div: {
                    FormalSeries d = run(a.kids[1]);
                    if (!(d.terms().size() == 1 && !d.constant_term().is_zero()))
                        throw std::invalid_argument("non-constant denominator");
                    Scalar c = d.constant_term();
                    if (!c.is_real())
                        throw std::invalid_argument("denominator must be rational");
                    FormalSeries num = run(a.kids[0]);
                    return (Scalar(1) / c) * num;
                }
                case ExprAst::Kind::pow:
                    return run(a.kids[0]).pow(a.exponent);
            }
            throw std::logic_error("lower: bad AST");
        }
    };

    Lowered out;
    Ev ev{ext, cap, out.warnings};
    FormalSeries full = ev.run(ast);
    if (full.reliable() < EXACT_DEGREE)
        out.warnings.push_back("terms beyond total degree " + std::to_string(trunc) +
                               " were dropped");

    bool has_hbar = false;
    for (const auto& [m, c] : full.terms())
        if (m.e[hbar_idx] > 0) {
            has_hbar = true;
            break;
        }
    out.has_hbar = has_hbar;
    if (!has_hbar) {
        out.series = full.projected(vars, trunc).truncated(trunc);
        if (out.series.reliable() < trunc + 1 && out.warnings.empty())
            out.warnings.push_back("terms beyond total degree " + std::to_string(trunc) +
                                   " were dropped");
        return out;
    }
    HbarSeries h(vars, trunc, hbar_order);
    bool dropped = false;
    for (const auto& [m, c] : full.terms()) {
        int j = m.e[hbar_idx];
        if (j > hbar_order) {
            dropped = true;
            continue;
        }
        MultiIndex r(vars->size());
        unsigned deg = 0;
        for (std::size_t t = 0; t < ext->size(); ++t) {
            if (t == hbar_idx)
                continue;
            r.e[vars->index_of(ext->at(t).name)] = m.e[t];
            deg += m.e[t];
        }
        if (static_cast<int>(deg) > trunc) {
            dropped = true;
            continue;
        }
        h.coeff(j).add_term(r, c);
    }
    if (dropped)
        out.warnings.push_back("terms beyond total degree " + std::to_string(trunc) +
                               " were dropped");
    out.hbar_series = h;
    return out;
}

namespace detail {

inline std::string coeff_magnitude(const Scalar& c) {
    // magnitude string for a sign-extracted coefficient; caller handles sign
    if (c.is_real())
        return to_string(c.re());
    if (c.re() == Rational(0)) {
        Rational a = c.im();
        if (a == Rational(1))
            return "i";
        return to_string(a) + "*i";
    }
    return "(" + c.str() + ")";
}

// sign split: mixed complex coefficients count as positive and are
// parenthesized by coeff_magnitude
inline bool is_neg(const Scalar& c) {
    if (c.is_real())
        return c.re() < Rational(0);
    if (c.re() == Rational(0))
        return c.im() < Rational(0);
    return false;
}
inline Scalar abs_for_print(const Scalar& c) { return is_neg(c) ? -c : c; }

inline std::string term_string(const VarSet& vars, const MultiIndex& m, const Scalar& c) {
    std::string var_part;
    for (std::size_t j = 0; j < vars.size(); ++j) {
        if (m.e[j] == 0)
            continue;
        if (!var_part.empty())
            var_part += "*";
        var_part += vars.at(j).name;
        if (m.e[j] > 1)
            var_part += "^" + std::to_string(int(m.e[j]));
    }
    Scalar a = abs_for_print(c);
    std::string mag = coeff_magnitude(a);
    if (var_part.empty())
        return mag;
    if (mag == "1")
        return var_part;
    return mag + "*" + var_part;
}

}  // namespace detail

// Deterministic ordering: total degree, then lexicographic multi-index.
inline std::string print_canonical(const FormalSeries& s) {
    if (s.is_zero())
        return "0";
    std::vector<std::pair<MultiIndex, Scalar>> terms(s.terms().begin(), s.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        unsigned da = a.first.total(), db = b.first.total();
        if (da != db)
            return da < db;
        return a.first < b.first;
    });
    std::string out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        bool neg = detail::is_neg(terms[t].second);
        if (t == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        out += detail::term_string(*s.vars(), terms[t].first, terms[t].second);
    }
    return out;
}

inline std::string print_canonical(const HbarSeries& h) {
    std::string out;
    for (int j = 0; j <= h.order(); ++j) {
        if (h.coeff(j).is_zero())
            continue;
        std::string c = print_canonical(h.coeff(j));
        if (j == 0) {
            out = c;
        } else {
            if (!out.empty())
                out += " + ";
            out += (j == 1 ? std::string("hbar") : "hbar^" + std::to_string(j)) + "*(" + c + ")";
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace micromorph
