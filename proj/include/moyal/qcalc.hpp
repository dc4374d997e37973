#pragma once

#include "moyal/errors.hpp"
#include "moyal/scalars.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace moyal {

/// Laurent polynomial sum_m c_m x^m with QScalar coefficients. The letter is `x` for
/// test functions and `y` for the discrete-KP evaluation variable.
class QLaurent {
public:
    QLaurent() = default;
    QLaurent(QScalar c) { add_term(0, std::move(c)); }
    QLaurent(Rational c) : QLaurent(QScalar(std::move(c))) {}
    template <std::integral I>
    QLaurent(I c) : QLaurent(QScalar(c)) {}

    static QLaurent monomial(int m, QScalar c = QScalar(1)) {
        QLaurent out;
        out.add_term(m, std::move(c));
        return out;
    }

    void add_term(int m, const QScalar& c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    const std::map<int, QScalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    QScalar coefficient(int m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? QScalar() : it->second;
    }

    QLaurent& operator+=(const QLaurent& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    QLaurent& operator-=(const QLaurent& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    friend QLaurent operator+(QLaurent a, const QLaurent& b) { return a += b; }
    friend QLaurent operator-(QLaurent a, const QLaurent& b) { return a -= b; }
    friend QLaurent operator-(const QLaurent& a) { return a * QScalar(-1); }
    friend QLaurent operator*(const QLaurent& a, const QScalar& s) {
        QLaurent out;
        for (const auto& [m, c] : a.terms_)
            out.add_term(m, c * s);
        return out;
    }
    friend QLaurent operator*(const QScalar& s, const QLaurent& a) { return a * s; }
    friend QLaurent operator*(const QLaurent& a, const QLaurent& b) {
        QLaurent out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                out.add_term(ma + mb, ca * cb);
        return out;
    }
    friend bool operator==(const QLaurent& a, const QLaurent& b) { return a.terms_ == b.terms_; }

    /// tau^s f: x^m -> q^{ms} x^m
    QLaurent shifted(int s) const {
        QLaurent out;
        for (const auto& [m, c] : terms_)
            out.add_term(m, c * QScalar::q_power(m * s));
        return out;
    }

    /// d_q x^m = (m)_q x^{m-1}
    QLaurent q_derivative() const {
        QLaurent out;
        for (const auto& [m, c] : terms_)
            out.add_term(m - 1, c * q_number(m));
        return out;
    }

    /// d_q^{-1} x^m = x^{m+1}/(m+1)_q; x^{-1} has no q-antiderivative here.
    QLaurent q_antiderivative() const {
        QLaurent out;
        for (const auto& [m, c] : terms_) {
            if (m == -1)
                throw NotIntegrable("d_q^{-1} is undefined on x^-1");
            out.add_term(m + 1, c / q_number(m + 1));
        }
        return out;
    }

    /// d_q^j for any integer j.
    QLaurent q_derivative(int j) const {
        QLaurent out = *this;
        for (int i = 0; i < j && !out.is_zero(); ++i)
            out = out.q_derivative();
        for (int i = 0; i > j && !out.is_zero(); --i)
            out = out.q_antiderivative();
        return out;
    }

    /// Specialization at a rational q, coefficients kept as constant QScalars.
    QLaurent at_q(const Rational& q) const {
        QLaurent out;
        for (const auto& [m, c] : terms_)
            out.add_term(m, QScalar(c.substitute(q)));
        return out;
    }

    bool is_monomial() const { return terms_.size() == 1; }

    /// Descending powers: `q*x^2 - (1 + q)*x + 3`.
    std::string str(const std::string& letter = "x") const { return render(letter, false); }
    std::string latex(const std::string& letter = "x") const { return render(letter, true); }

    /// One q-monomial over another; rendered without parentheses.
    static bool is_single_term(const QScalar& c) {
        return c.numerator().term_count() == 1 && c.denominator().term_count() == 1;
    }

private:

    std::string render(const std::string& letter, bool tex) const {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            QScalar shown = c;
            bool negative = is_single_term(c) && c.numerator().leading().sign() < 0;
            if (negative)
                shown = -c;
            out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
            first = false;
            std::string power;
            if (m != 0) {
                power = letter;
                if (m != 1)
                    power += tex ? "^{" + std::to_string(m) + "}" : "^" + std::to_string(m);
            }
            std::string coeff = tex ? shown.latex() : shown.str();
            if (!is_single_term(shown) && !(tex && !shown.is_polynomial()))
                coeff = "(" + coeff + ")";
            if (power.empty())
                out += coeff;
            else if (shown == QScalar(1))
                out += power;
            else
                out += coeff + (tex ? " " : "*") + power;
        }
        return out;
    }

    std::map<int, QScalar> terms_;
};

/// One letter of an operator word: a multiplication operator, tau^power, or d_q^power.
struct QLetter {
    enum class Kind { Coef, Shift, Deriv };
    Kind kind = Kind::Coef;
    QLaurent coef;
    int power = 0;

    static QLetter coefficient(QLaurent c) { return {Kind::Coef, std::move(c), 0}; }
    static QLetter shift(int s) { return {Kind::Shift, {}, s}; }
    static QLetter deriv(int b) { return {Kind::Deriv, {}, b}; }

    friend bool operator==(const QLetter&, const QLetter&) = default;
};

using QWord = std::vector<QLetter>;

/// Sum of words in coefficients, tau and d_q. A normal form stores one word
/// [c, tau^a, d_q^b] per (a, b); `floor` marks a truncated d_q^{-1} tail (powers
/// below it are untracked).
class QOperator {
public:
    QOperator() = default;
    QOperator(QLaurent c) { words_.push_back({QLetter::coefficient(std::move(c))}); }
    QOperator(QScalar c) : QOperator(QLaurent(std::move(c))) {}
    template <std::integral I>
    QOperator(I c) : QOperator(QLaurent(c)) {}

    static QOperator word(QWord w) {
        QOperator out;
        out.words_.push_back(std::move(w));
        return out;
    }
    static QOperator shift(int s = 1) { return word({QLetter::shift(s)}); }
    static QOperator dq(int b = 1) { return word({QLetter::deriv(b)}); }
    static QOperator x(int m = 1) { return QOperator(QLaurent::monomial(m)); }

    const std::vector<QWord>& words() const { return words_; }
    std::optional<int> floor() const { return floor_; }
    void set_floor(std::optional<int> f) { floor_ = f; }

    friend QOperator operator+(QOperator a, const QOperator& b) {
        a.words_.insert(a.words_.end(), b.words_.begin(), b.words_.end());
        a.floor_ = merge_floor(a.floor_, b.floor_);
        return a;
    }
    friend QOperator operator-(const QOperator& a) {
        QOperator out = a;
        for (auto& w : out.words_)
            w.insert(w.begin(), QLetter::coefficient(QLaurent(-1)));
        return out;
    }
    friend QOperator operator-(const QOperator& a, const QOperator& b) { return a + (-b); }
    /// Composition: every word of a followed by every word of b.
    friend QOperator operator*(const QOperator& a, const QOperator& b) {
        QOperator out;
        for (const auto& wa : a.words_)
            for (const auto& wb : b.words_) {
                QWord w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                out.words_.push_back(std::move(w));
            }
        out.floor_ = merge_floor(a.floor_, b.floor_);
        return out;
    }

    friend bool operator==(const QOperator&, const QOperator&) = default;

private:
    static std::optional<int> merge_floor(std::optional<int> a, std::optional<int> b) {
        if (a && b)
            return std::max(*a, *b);
        return a ? a : b;
    }

    std::vector<QWord> words_;
    std::optional<int> floor_;
};

/// Normal-form operator as a map (tau power a, d_q power b) -> coefficient.
struct QNormal {
    std::map<std::pair<int, int>, QLaurent> terms;
    std::optional<int> floor;

    void add(int a, int b, const QLaurent& c) {
        if (floor && b < *floor)
            return;
        if (c.is_zero())
            return;
        QLaurent& slot = terms[{a, b}];
        slot += c;
        if (slot.is_zero())
            terms.erase({a, b});
    }

    QOperator to_operator() const {
        QOperator out;
        bool any = false;
        for (const auto& [ab, c] : ordered()) {
            QWord w{QLetter::coefficient(c)};
            if (ab.first != 0)
                w.push_back(QLetter::shift(ab.first));
            if (ab.second != 0)
                w.push_back(QLetter::deriv(ab.second));
            out = any ? out + QOperator::word(w) : QOperator::word(w);
            any = true;
        }
        out.set_floor(floor);
        return out;
    }

    /// Ascending d_q power, then ascending tau power.
    std::vector<std::pair<std::pair<int, int>, QLaurent>> ordered() const {
        std::vector<std::pair<std::pair<int, int>, QLaurent>> out(terms.begin(), terms.end());
        std::stable_sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
            return l.first.second != r.first.second ? l.first.second < r.first.second : l.first.first < r.first.first;
        });
        return out;
    }
};

/// One term of d_q^n u = sum_k [n k]_q (tau^{n-k} d_q^k u) d_q^{n-k}.
struct LeibnizTerm {
    QScalar coeff;
    int shift = 0;
    int u_derivs = 0;
    int dq_power = 0;
};

/// Generalized q-Leibniz rule; for negative n the series is cut after `depth` terms.
inline std::vector<LeibnizTerm> leibniz_terms(int n, int depth = 4) {
    std::vector<LeibnizTerm> out;
    const int count = n >= 0 ? n + 1 : depth;
    for (int k = 0; k < count; ++k)
        out.push_back({q_binomial(n, k), n - k, k, n - k});
    return out;
}

namespace detail {

/// c tau^a d_q^b * g, pushed into normal form. For b < 0 the tail is cut below d_q^{-depth}.
inline void push_coefficient(QNormal& acc, int a, int b, const QLaurent& c, const QLaurent& g, int depth) {
    if (b >= 0) {
        QLaurent dk = g;
        for (int k = 0; k <= b && !dk.is_zero(); ++k) {
            acc.add(a, b - k, c * (dk.shifted(a + b - k) * q_binomial(b, k)));
            dk = dk.q_derivative();
        }
        return;
    }
    QLaurent dk = g;
    for (int k = 0; !dk.is_zero(); ++k) {
        if (b - k < -depth) {
            acc.floor = acc.floor ? std::max(*acc.floor, -depth) : -depth;
            for (auto it = acc.terms.begin(); it != acc.terms.end();)
                it = it->first.second < *acc.floor ? acc.terms.erase(it) : std::next(it);
            return;
        }
        acc.add(a, b - k, c * (dk.shifted(a + b - k) * q_binomial(b, k)));
        dk = dk.q_derivative();
    }
}

inline QNormal normal_word(const QWord& w, int depth) {
    QNormal acc;
    acc.add(0, 0, QLaurent(1));
    for (const auto& letter : w) {
        QNormal next;
        next.floor = acc.floor;
        switch (letter.kind) {
        case QLetter::Kind::Coef:
            for (const auto& [ab, c] : acc.terms)
                push_coefficient(next, ab.first, ab.second, c, letter.coef, depth);
            break;
        case QLetter::Kind::Shift:
            // d_q^b tau^s = q^{bs} tau^s d_q^b
            for (const auto& [ab, c] : acc.terms)
                next.add(ab.first + letter.power, ab.second, c * QScalar::q_power(ab.second * letter.power));
            break;
        case QLetter::Kind::Deriv:
            if (next.floor)
                *next.floor += letter.power;
            for (const auto& [ab, c] : acc.terms)
                next.add(ab.first, ab.second + letter.power, c);
            break;
        }
        acc = std::move(next);
    }
    return acc;
}

} // namespace detail

/// Coefficients left of tau, tau left of d_q. `depth` bounds d_q^{-1} tails (floor -depth).
inline QNormal normal_terms(const QOperator& A, int depth = 4) {
    QNormal out;
    out.floor = A.floor();
    for (const auto& w : A.words()) {
        QNormal part = detail::normal_word(w, depth);
        if (part.floor)
            out.floor = out.floor ? std::max(*out.floor, *part.floor) : part.floor;
        for (const auto& [ab, c] : part.terms)
            out.add(ab.first, ab.second, c);
    }
    if (out.floor)
        for (auto it = out.terms.begin(); it != out.terms.end();)
            it = it->first.second < *out.floor ? out.terms.erase(it) : std::next(it);
    return out;
}

inline QOperator normal_form(const QOperator& A, int depth = 4) { return normal_terms(A, depth).to_operator(); }

/// Letter-by-letter action, rightmost letter first.
inline QLaurent q_apply(const QOperator& A, const QLaurent& f) {
    QLaurent out;
    for (const auto& w : A.words()) {
        QLaurent g = f;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            switch (it->kind) {
            case QLetter::Kind::Coef: g = it->coef * g; break;
            case QLetter::Kind::Shift: g = g.shifted(it->power); break;
            case QLetter::Kind::Deriv: g = g.q_derivative(it->power); break;
            }
        }
        out += g;
    }
    return out;
}

inline QOperator q_commutator(const QOperator& A, const QOperator& B, int depth = 4) {
    return normal_form(A * B - B * A, depth);
}

inline bool operator_equal(const QOperator& A, const QOperator& B, int depth = 4) {
    QNormal a = normal_terms(A, depth), b = normal_terms(B, depth);
    return a.terms == b.terms && a.floor == b.floor;
}

inline std::string render_normal(const QNormal& n, bool tex) {
    std::string out;
    bool first = true;
    for (const auto& [ab, c] : n.ordered()) {
        std::string ops;
        auto letter = [&](const char* text, const char* latex_name, int e) {
            if (e == 0)
                return;
            std::string s = tex ? latex_name : text;
            if (e != 1)
                s += tex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
            ops += (ops.empty() ? "" : (tex ? " " : "*")) + s;
        };
        letter("T", "\\tau", ab.first);
        letter("dq", "\\partial_q", ab.second);
        std::string coeff = tex ? c.latex() : c.str();
        bool compound = c.terms().size() > 1;
        bool negative = false;
        if (!compound && coeff.starts_with("-")) {
            negative = true;
            coeff = coeff.substr(1);
        }
        if (compound)
            coeff = "(" + coeff + ")";
        out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
        first = false;
        if (ops.empty())
            out += coeff;
        else if (coeff == "1")
            out += ops;
        else
            out += coeff + (tex ? " " : "*") + ops;
    }
    if (out.empty())
        out = "0";
    if (n.floor) {
        std::string o = tex ? "O(\\partial_q^{" + std::to_string(*n.floor - 1) + "})"
                            : "O(dq^" + std::to_string(*n.floor - 1) + ")";
        out += " + " + o;
    }
    return out;
}

/// Which bracket the discrete-KP map uses for [k+i choose k].
enum class BracketConvention { QBinomial, Binomial };

/// a_i = sum_k coeff * y^{y_power} * b_{b_index}
struct DkpTerm {
    QScalar coeff;
    int y_power = 0;
    int b_index = 0;
};

/// a_i(y) = sum_{0<=k<=n-i} [k+i choose k] / (-y (q-1) q^i)^k * b_{k+i}(y), i = 0..n.
inline std::vector<std::vector<DkpTerm>> discrete_kp_map(int n, BracketConvention conv = BracketConvention::QBinomial) {
    if (n < 0)
        throw InvalidRequest("discrete-KP map needs n >= 0");
    const QScalar q_minus_one(QPoly(std::vector<Rational>{Rational(-1), Rational(1)}));
    std::vector<std::vector<DkpTerm>> out;
    for (int i = 0; i <= n; ++i) {
        std::vector<DkpTerm> row;
        QScalar denom_step = -(q_minus_one * QScalar::q_power(i));
        QScalar denom(1);
        for (int k = 0; k <= n - i; ++k) {
            QScalar bracket = conv == BracketConvention::QBinomial ? q_binomial(k + i, k)
                                                                   : QScalar(binomial(k + i, k));
            row.push_back({bracket / denom, -k, k + i});
            denom *= denom_step;
        }
        out.push_back(std::move(row));
    }
    return out;
}

/// The map applied to concrete b_0 .. b_n (Laurent in y).
inline std::vector<QLaurent> discrete_kp_apply(const std::vector<QLaurent>& b, int n,
                                               BracketConvention conv = BracketConvention::QBinomial) {
    if (static_cast<int>(b.size()) < n + 1)
        throw InsufficientCoefficients("discrete-KP map at n = " + std::to_string(n) + " needs b_0 .. b_" +
                                       std::to_string(n));
    std::vector<QLaurent> out;
    for (const auto& row : discrete_kp_map(n, conv)) {
        QLaurent a;
        for (const auto& t : row)
            a += QLaurent::monomial(t.y_power, t.coeff) * b[static_cast<std::size_t>(t.b_index)];
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace moyal
