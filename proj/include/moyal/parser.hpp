#pragma once

#include "moyal/qcalc.hpp"
#include "moyal/symbols.hpp"

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace moyal {

/// Syntax error with 1-based position and the set of tokens that would have been accepted.
struct ParseError : std::runtime_error {
    ParseError(int line, int column, std::vector<std::string> expected, const std::string& found)
        : std::runtime_error(format(line, column, expected, found)), line(line), column(column),
          expected(std::move(expected)) {}

    int line;
    int column;
    std::vector<std::string> expected;

private:
    static std::string format(int line, int column, const std::vector<std::string>& expected, const std::string& found) {
        std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
        if (expected.empty())
            return msg + found;
        msg += "unexpected " + found + "; expected ";
        for (std::size_t i = 0; i < expected.size(); ++i)
            msg += (i ? ", " : "") + expected[i];
        return msg;
    }
};

namespace detail {

struct Token {
    enum class Kind { Number, Ident, Jet, Op, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int column = 1;
    // Jet payload.
    std::uint32_t field = 0;
    std::uint32_t order = 0;
};

inline std::string describe(const Token& t) {
    if (t.kind == Token::Kind::End)
        return "end of input";
    return "'" + t.text + "'";
}

/// Splits `u`, `u1`, `u_xx`, `u3_x` into (field, order); false for any other identifier.
inline bool jet_name(std::string_view s, std::uint32_t& field, std::uint32_t& order) {
    if (s.empty() || s[0] != 'u')
        return false;
    std::size_t i = 1;
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        digits += s[i++];
    if (!digits.empty() && (digits[0] == '0' || digits == "0"))
        return false;
    field = digits.empty() ? 0 : static_cast<std::uint32_t>(std::stoul(digits));
    order = 0;
    if (i == s.size())
        return true;
    if (s[i] != '_' || i + 1 == s.size())
        return false;
    for (std::size_t j = i + 1; j < s.size(); ++j)
        if (s[j] != 'x')
            return false;
    order = static_cast<std::uint32_t>(s.size() - i - 1);
    return order <= 3;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = Token::Kind::Number;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    t.text += advance();
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Token::Kind::Ident;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    t.text += advance();
                std::uint32_t field = 0, order = 0;
                if (jet_name(t.text, field, order)) {
                    t.kind = Token::Kind::Jet;
                    t.field = field;
                    t.order = order;
                    if (t.text.find('_') == std::string::npos)
                        try_high_order(t);
                }
            } else if (std::string_view("+-*/^()#,").find(c) != std::string_view::npos) {
                t.kind = Token::Kind::Op;
                t.text = std::string(1, advance());
            } else {
                throw ParseError(line_, col_, {}, "unexpected character '" + std::string(1, c) + "'");
            }
            out.push_back(std::move(t));
        }
    }

private:
    /// `u^(n)` / `u2^(n)` is a single jet token (the n-th derivative).
    void try_high_order(Token& t) {
        std::size_t p = pos_;
        if (p + 1 >= src_.size() || src_[p] != '^' || src_[p + 1] != '(')
            return;
        p += 2;
        std::string digits;
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p])))
            digits += src_[p++];
        if (digits.empty() || p >= src_.size() || src_[p] != ')')
            return;
        while (pos_ <= p)
            t.text += advance();
        t.order = static_cast<std::uint32_t>(std::stoul(digits));
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

/// Shared recursive-descent skeleton; `Value` supplies the algebra.
template <class Derived, class Value>
class ParserBase {
public:
    explicit ParserBase(std::string_view src) : tokens_(Lexer(src).run()) {}

    Value parse_all() {
        Value v = expr();
        if (peek().kind != Token::Kind::End)
            fail({"operator", "end of input"});
        return v;
    }

protected:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& take() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
    bool at_op(const char* op) const { return peek().kind == Token::Kind::Op && peek().text == op; }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError(peek().line, peek().column, std::move(expected), describe(peek()));
    }
    [[noreturn]] void fail_at(const Token& t, const std::string& what) const {
        throw ParseError(t.line, t.column, {}, what);
    }
    void expect(const char* op) {
        if (!at_op(op))
            fail({std::string("'") + op + "'"});
        take();
    }

    Derived& self() { return static_cast<Derived&>(*this); }

    Value expr() {
        Value v = term();
        while (at_op("+") || at_op("-")) {
            bool plus = take().text == "+";
            Value rhs = term();
            v = plus ? self().add(v, rhs) : self().sub(v, rhs);
        }
        return v;
    }

    Value term() {
        Value v = unary();
        while (at_op("*") || at_op("/") || at_op("#")) {
            const Token op = take();
            Value rhs = unary();
            if (op.text == "*")
                v = self().mul(v, rhs);
            else if (op.text == "#")
                v = self().star_op(v, rhs, op);
            else
                v = self().div(v, rhs, op);
        }
        return v;
    }

    Value unary() {
        if (at_op("-")) {
            take();
            return self().neg(unary());
        }
        if (at_op("+")) {
            take();
            return unary();
        }
        return power();
    }

    Value power() {
        const Token start = peek();
        Value base = self().atom();
        if (!at_op("^"))
            return base;
        const Token caret = take();
        int e = exponent();
        // Right associativity: a^b^c = a^(b^c) with integer b, c.
        if (at_op("^")) {
            take();
            int outer = exponent();
            long value = 1;
            for (int i = 0; i < outer; ++i)
                value *= e;
            if (outer < 0)
                fail_at(caret, "negative exponent on an exponent");
            e = static_cast<int>(value);
        }
        return self().pow(base, e, start);
    }

    /// Integer exponent, optionally signed and/or parenthesized.
    int exponent() {
        bool paren = false;
        if (at_op("(")) {
            take();
            paren = true;
        }
        bool negative = false;
        if (at_op("-")) {
            take();
            negative = true;
        }
        if (peek().kind != Token::Kind::Number)
            fail({"integer exponent"});
        long v = std::stol(take().text);
        if (paren) {
            if (!at_op(")"))
                fail({"')'"});
            take();
        }
        return static_cast<int>(negative ? -v : v);
    }

    Rational number() {
        std::string digits = take().text;
        return Rational::parse(digits);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

class SymbolParser : public ParserBase<SymbolParser, PhaseSymbol> {
public:
    using ParserBase::ParserBase;
    friend class ParserBase<SymbolParser, PhaseSymbol>;

private:
    PhaseSymbol add(const PhaseSymbol& a, const PhaseSymbol& b) { return a + b; }
    PhaseSymbol sub(const PhaseSymbol& a, const PhaseSymbol& b) { return a - b; }
    PhaseSymbol neg(const PhaseSymbol& a) { return -a; }
    PhaseSymbol mul(const PhaseSymbol& a, const PhaseSymbol& b) { return multiply_commutative(a, b); }
    PhaseSymbol star_op(const PhaseSymbol& a, const PhaseSymbol& b, const Token&) {
        auto bound = contamination_bound(a, b);
        return star(a, b, ProductKind::Moyal, bound);
    }
    PhaseSymbol div(const PhaseSymbol& a, const PhaseSymbol& b, const Token& op) {
        auto c = constant_of(b);
        if (!c || c->is_zero())
            fail_at(op, "division by a non-constant or zero divisor");
        return a * (Rational(1) / *c);
    }
    PhaseSymbol pow(const PhaseSymbol& base, int e, const Token& at) {
        if (e >= 0) {
            PhaseSymbol acc(1);
            for (int i = 0; i < e; ++i)
                acc = multiply_commutative(acc, base);
            return acc;
        }
        if (base.is_exact() && base.terms().size() == 1 && base.terms().begin()->second == DiffPoly(1))
            return PhaseSymbol::momentum(base.terms().begin()->first * e);
        fail_at(at, "negative exponent on something other than p");
    }

    static std::optional<Rational> constant_of(const PhaseSymbol& s) {
        if (!s.is_exact())
            return std::nullopt;
        if (s.is_zero())
            return Rational(0);
        if (s.terms().size() != 1 || s.terms().begin()->first != 0)
            return std::nullopt;
        const DiffPoly& c = s.terms().begin()->second;
        if (!c.is_constant())
            return std::nullopt;
        KappaScalar k = c.terms().begin()->second;
        if (!k.is_constant())
            return std::nullopt;
        return k.constant_term();
    }

    PhaseSymbol atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Kind::Number: {
            Rational r = number();
            return PhaseSymbol(r);
        }
        case Token::Kind::Jet: {
            const Token j = take();
            return PhaseSymbol(DiffPoly::field(j.field, j.order));
        }
        case Token::Kind::Ident: {
            const Token id = take();
            if (id.text == "p")
                return PhaseSymbol::momentum(1);
            if (id.text == "k")
                return PhaseSymbol(DiffPoly(kappa()));
            if (id.text == "x")
                return PhaseSymbol(DiffPoly::coordinate());
            if (id.text == "O")
                return big_o();
            fail_at(id, "unknown identifier '" + id.text + "'");
        }
        case Token::Kind::Op:
            if (t.text == "(") {
                take();
                PhaseSymbol v = expr();
                expect(")");
                return v;
            }
            break;
        default:
            break;
        }
        fail({"number", "p", "k", "x", "jet variable", "'('", "O(p^n)"});
    }

    /// O(p^n): everything below p^{n+1} is untracked.
    PhaseSymbol big_o() {
        expect("(");
        if (!(peek().kind == Token::Kind::Ident && peek().text == "p"))
            fail({"p"});
        take();
        int n = 1;
        if (at_op("^")) {
            take();
            n = exponent();
        }
        expect(")");
        return PhaseSymbol().truncated(n + 1);
    }
};

class QParser : public ParserBase<QParser, QOperator> {
public:
    QParser(std::string_view src, std::string letter) : ParserBase(src), letter_(std::move(letter)) {}
    friend class ParserBase<QParser, QOperator>;

private:
    QOperator add(const QOperator& a, const QOperator& b) { return a + b; }
    QOperator sub(const QOperator& a, const QOperator& b) { return a - b; }
    QOperator neg(const QOperator& a) { return -a; }
    QOperator mul(const QOperator& a, const QOperator& b) { return a * b; }
    QOperator star_op(const QOperator&, const QOperator&, const Token& op) { fail_at(op, "'#' in a q-operator"); }
    QOperator div(const QOperator& a, const QOperator& b, const Token& op) {
        auto c = scalar_of(b);
        if (!c || c->is_zero())
            fail_at(op, "division by a non-scalar or zero divisor");
        return a * QOperator(QScalar(1) / *c);
    }
    QOperator pow(const QOperator& base, int e, const Token& at) {
        if (e >= 0) {
            QOperator acc(1);
            for (int i = 0; i < e; ++i)
                acc = acc * base;
            return e == 0 ? QOperator(1) : simplify_single(acc);
        }
        if (base.words().size() == 1 && base.words()[0].size() == 1) {
            const QLetter& l = base.words()[0][0];
            if (l.kind != QLetter::Kind::Coef)
                return QOperator::word({l.kind == QLetter::Kind::Shift ? QLetter::shift(l.power * e) : QLetter::deriv(l.power * e)});
            if (l.coef.is_monomial()) {
                auto [m, c] = *l.coef.terms().begin();
                if (c.numerator().term_count() == 1 && c.is_polynomial()) {
                    int qe = c.numerator().degree();
                    Rational lead = c.numerator().leading();
                    return QOperator(QLaurent::monomial(m * e, QScalar::q_power(qe * e) * QScalar(lead.pow(e))));
                }
            }
        }
        fail_at(at, "negative exponent on something other than dq, T, x or q");
    }

    /// Collapses a single word of identical letters (dq*dq -> dq^2) so powers print compactly.
    static QOperator simplify_single(const QOperator& op) {
        if (op.words().size() != 1)
            return op;
        const QWord& w = op.words()[0];
        if (w.empty())
            return op;
        QLetter first = w[0];
        if (first.kind == QLetter::Kind::Coef) {
            QLaurent c(1);
            for (const auto& l : w) {
                if (l.kind != QLetter::Kind::Coef)
                    return op;
                c = c * l.coef;
            }
            return QOperator(c);
        }
        int total = 0;
        for (const auto& l : w) {
            if (l.kind != first.kind)
                return op;
            total += l.power;
        }
        return QOperator::word({first.kind == QLetter::Kind::Shift ? QLetter::shift(total) : QLetter::deriv(total)});
    }

    static std::optional<QScalar> scalar_of(const QOperator& op) {
        QNormal n = normal_terms(op);
        if (n.floor)
            return std::nullopt;
        if (n.terms.empty())
            return QScalar(0);
        if (n.terms.size() != 1 || n.terms.begin()->first != std::pair<int, int>{0, 0})
            return std::nullopt;
        const QLaurent& c = n.terms.begin()->second;
        if (c.terms().size() != 1 || c.terms().begin()->first != 0)
            return std::nullopt;
        return c.terms().begin()->second;
    }

    QOperator atom() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Number) {
            Rational r = number();
            return QOperator(QScalar(r));
        }
        if (t.kind == Token::Kind::Ident) {
            const Token id = take();
            if (id.text == "q")
                return QOperator(QScalar::q_power(1));
            if (id.text == letter_)
                return QOperator::x(1);
            if (id.text == "dq")
                return QOperator::dq(1);
            if (id.text == "T")
                return QOperator::shift(1);
            fail_at(id, "unknown identifier '" + id.text + "'");
        }
        if (t.kind == Token::Kind::Op && t.text == "(") {
            take();
            QOperator v = expr();
            expect(")");
            return v;
        }
        fail({"number", "q", letter_, "dq", "T", "'('"});
    }

    std::string letter_;
};

} // namespace detail

/// Phase-space symbol: numbers, k, p, x, jets, + - * # / ^ ( ), and O(p^n).
/// `*` is the plain product, `#` the exact Moyal star.
inline PhaseSymbol parse_symbol(std::string_view src) { return detail::SymbolParser(src).parse_all(); }

/// A differential polynomial (the symbol must be p-free and exact).
inline DiffPoly parse_diffpoly(std::string_view src) {
    PhaseSymbol s = parse_symbol(src);
    if (!s.is_exact() || (!s.is_zero() && (s.terms().size() != 1 || s.terms().begin()->first != 0)))
        throw ParseError(1, 1, {"expression without p"}, "'" + std::string(src) + "'");
    return s.coefficient(0);
}

/// q-operator words in dq, T, the coefficient letter and q.
inline QOperator parse_qoperator(std::string_view src, const std::string& letter = "x") {
    return detail::QParser(src, letter).parse_all();
}

/// A pure coefficient (no dq or T) in the given letter.
inline QLaurent parse_qlaurent(std::string_view src, const std::string& letter = "x") {
    QNormal n = normal_terms(parse_qoperator(src, letter));
    if (n.floor)
        throw ParseError(1, 1, {"coefficient expression"}, "'" + std::string(src) + "'");
    QLaurent out;
    for (const auto& [ab, c] : n.terms) {
        if (ab != std::pair<int, int>{0, 0})
            throw ParseError(1, 1, {"coefficient expression without dq or T"}, "'" + std::string(src) + "'");
        out += c;
    }
    return out;
}

} // namespace moyal
