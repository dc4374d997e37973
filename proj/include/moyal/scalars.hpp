#pragma once

#include "moyal/rational.hpp"

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moyal {

struct KappaTag {
    static constexpr const char* text_name = "k";
    static constexpr const char* latex_name = "\\kappa";
};

struct QTag {
    static constexpr const char* text_name = "q";
    static constexpr const char* latex_name = "q";
};

/// Dense univariate polynomial over Rational. Trailing zero coefficients are
/// never stored, so the zero polynomial has no coefficients at all.
template <class Tag>
class DensePoly {
public:
    DensePoly() = default;
    DensePoly(Rational c) {
        if (!c.is_zero())
            coeffs_.push_back(std::move(c));
    }
    template <std::integral I>
    DensePoly(I c) : DensePoly(Rational(c)) {}

    explicit DensePoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    /// c * var^power
    static DensePoly monomial(int power, Rational c = Rational(1)) {
        if (power < 0)
            throw std::invalid_argument("DensePoly: negative power");
        std::vector<Rational> v(static_cast<std::size_t>(power) + 1);
        v.back() = std::move(c);
        return DensePoly(std::move(v));
    }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// Lowest power with a nonzero coefficient; -1 for zero.
    int valuation() const {
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (!coeffs_[i].is_zero())
                return static_cast<int>(i);
        return -1;
    }
    std::size_t term_count() const {
        std::size_t n = 0;
        for (const auto& c : coeffs_)
            n += c.is_zero() ? 0 : 1;
        return n;
    }

    Rational coefficient(int power) const {
        if (power < 0 || power >= static_cast<int>(coeffs_.size()))
            return Rational(0);
        return coeffs_[static_cast<std::size_t>(power)];
    }
    const std::vector<Rational>& coefficients() const { return coeffs_; }
    Rational constant_term() const { return coefficient(0); }
    Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

    Rational evaluate(const Rational& at) const {
        Rational acc;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * at + *it;
        return acc;
    }

    /// var -> factor * var
    DensePoly rescale(const Rational& factor) const {
        std::vector<Rational> v = coeffs_;
        Rational f(1);
        for (auto& c : v) {
            c *= f;
            f *= factor;
        }
        return DensePoly(std::move(v));
    }

    /// Multiplies by var^n (n >= 0) or divides by var^{-n}; division must be exact.
    DensePoly shift(int n) const {
        if (is_zero())
            return {};
        if (n >= 0) {
            std::vector<Rational> v(static_cast<std::size_t>(n));
            v.insert(v.end(), coeffs_.begin(), coeffs_.end());
            return DensePoly(std::move(v));
        }
        if (valuation() < -n)
            throw std::logic_error("DensePoly: inexact division by a power of the variable");
        return DensePoly(std::vector<Rational>(coeffs_.begin() - n, coeffs_.end()));
    }

    DensePoly& operator+=(const DensePoly& o) {
        if (o.coeffs_.size() > coeffs_.size())
            coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
            coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    DensePoly& operator-=(const DensePoly& o) {
        if (o.coeffs_.size() > coeffs_.size())
            coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
            coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    DensePoly& operator*=(const Rational& c) {
        if (c.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& x : coeffs_)
            x *= c;
        return *this;
    }

    friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
    friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
    friend DensePoly operator-(DensePoly a) { return a *= Rational(-1); }
    friend DensePoly operator*(DensePoly a, const Rational& c) { return a *= c; }
    friend DensePoly operator*(const Rational& c, DensePoly a) { return a *= c; }
    friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i].is_zero())
                continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                v[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
        return DensePoly(std::move(v));
    }
    DensePoly& operator*=(const DensePoly& o) { return *this = *this * o; }

    friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.coeffs_ == b.coeffs_; }

    /// Euclidean division over the rationals.
    friend std::pair<DensePoly, DensePoly> divmod(const DensePoly& a, const DensePoly& b) {
        if (b.is_zero())
            throw std::domain_error("DensePoly: division by zero polynomial");
        DensePoly quotient;
        DensePoly rem = a;
        const int db = b.degree();
        const Rational lead = b.leading();
        while (!rem.is_zero() && rem.degree() >= db) {
            int shift_by = rem.degree() - db;
            DensePoly term = monomial(shift_by, rem.leading() / lead);
            quotient += term;
            rem -= term * b;
        }
        return {quotient, rem};
    }

    DensePoly monic() const {
        if (is_zero())
            return {};
        return *this * (Rational(1) / leading());
    }

    friend DensePoly gcd(DensePoly a, DensePoly b) {
        while (!b.is_zero()) {
            DensePoly r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    /// Ascending text form `c0 + c1*k + c2*k^2`.
    std::string str() const { return render(false); }
    std::string latex() const { return render(true); }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero())
            coeffs_.pop_back();
    }

    std::string render(bool tex) const {
        if (is_zero())
            return "0";
        std::string out;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational& c = coeffs_[i];
            if (c.is_zero())
                continue;
            Rational mag = c.abs();
            if (first)
                out += c.sign() < 0 ? "-" : "";
            else
                out += c.sign() < 0 ? " - " : " + ";
            first = false;
            std::string var;
            if (i > 0) {
                var = tex ? Tag::latex_name : Tag::text_name;
                if (i > 1)
                    var += tex ? "^{" + std::to_string(i) + "}" : "^" + std::to_string(i);
            }
            if (var.empty())
                out += tex ? mag.latex() : mag.str();
            else if (mag.is_one())
                out += var;
            else
                out += tex ? mag.latex() + " " + var : mag.str() + "*" + var;
        }
        return out;
    }

    std::vector<Rational> coeffs_;
};

/// Coefficient ring of the deformed symbol algebra: polynomials in kappa.
using KappaScalar = DensePoly<KappaTag>;
using QPoly = DensePoly<QTag>;

inline KappaScalar kappa(int power = 1) { return KappaScalar::monomial(power); }

inline Rational substitute_kappa(const KappaScalar& s, const Rational& value) { return s.evaluate(value); }

/// Rational function in q, kept with a monic denominator coprime to the numerator.
class QScalar {
public:
    QScalar() : den_(1) {}
    QScalar(Rational c) : num_(std::move(c)), den_(1) {}
    template <std::integral I>
    QScalar(I c) : QScalar(Rational(c)) {}
    QScalar(QPoly num) : num_(std::move(num)), den_(1) {}
    QScalar(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    /// q^e for any integer e.
    static QScalar q_power(int e) {
        if (e >= 0)
            return QScalar(QPoly::monomial(e));
        return QScalar(QPoly(1), QPoly::monomial(-e));
    }

    const QPoly& numerator() const { return num_; }
    const QPoly& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.degree() == 0; }
    bool is_constant() const { return num_.is_constant() && den_.degree() == 0; }

    Rational substitute(const Rational& q) const {
        Rational d = den_.evaluate(q);
        if (d.is_zero())
            throw std::domain_error("QScalar: pole at the substituted value");
        return num_.evaluate(q) / d;
    }

    QScalar& operator+=(const QScalar& o) { return *this = QScalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_); }
    QScalar& operator-=(const QScalar& o) { return *this = QScalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_); }
    QScalar& operator*=(const QScalar& o) { return *this = QScalar(num_ * o.num_, den_ * o.den_); }
    QScalar& operator/=(const QScalar& o) {
        if (o.is_zero())
            throw std::domain_error("QScalar: division by zero");
        return *this = QScalar(num_ * o.den_, den_ * o.num_);
    }
    friend QScalar operator+(QScalar a, const QScalar& b) { return a += b; }
    friend QScalar operator-(QScalar a, const QScalar& b) { return a -= b; }
    friend QScalar operator*(QScalar a, const QScalar& b) { return a *= b; }
    friend QScalar operator/(QScalar a, const QScalar& b) { return a /= b; }
    friend QScalar operator-(const QScalar& a) { return QScalar(-a.num_, a.den_); }
    friend bool operator==(const QScalar& a, const QScalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    /// `num` when the denominator is 1, otherwise `num/den` with compound parts parenthesized.
    std::string str() const {
        if (is_polynomial())
            return num_.str();
        auto wrap = [](const std::string& s) {
            return s.find(' ') == std::string::npos && s.find('/') == std::string::npos ? s : "(" + s + ")";
        };
        std::string d = den_.str();
        return wrap(num_.str()) + "/" + (d.find('*') == std::string::npos ? wrap(d) : "(" + d + ")");
    }
    std::string latex() const {
        if (is_polynomial())
            return num_.latex();
        return "\\frac{" + num_.latex() + "}{" + den_.latex() + "}";
    }

private:
    void normalize() {
        if (den_.is_zero())
            throw std::domain_error("QScalar: zero denominator");
        if (num_.is_zero()) {
            den_ = QPoly(1);
            return;
        }
        QPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = divmod(num_, g).first;
            den_ = divmod(den_, g).first;
        }
        Rational lead = den_.leading();
        if (!lead.is_one()) {
            num_ *= Rational(1) / lead;
            den_ *= Rational(1) / lead;
        }
    }

    QPoly num_;
    QPoly den_;
};

/// (q^n - 1)/(q - 1); the polynomial 1 + q + ... + q^{n-1} for n >= 0.
inline QScalar q_number(int n) {
    if (n >= 0) {
        std::vector<Rational> v(static_cast<std::size_t>(n), Rational(1));
        return QScalar(QPoly(std::move(v)));
    }
    return (QScalar::q_power(n) - QScalar(1)) / QScalar(QPoly(std::vector<Rational>{Rational(-1), Rational(1)}));
}

/// q-binomial [m k]_q from the falling product (m)_q (m-1)_q ... (m-k+1)_q / ((1)_q ... (k)_q);
/// m may be negative.
inline QScalar q_binomial(int m, int k) {
    if (k < 0)
        return QScalar(0);
    QScalar num(1), den(1);
    for (int j = 0; j < k; ++j) {
        num *= q_number(m - j);
        den *= q_number(j + 1);
    }
    return num / den;
}

} // namespace moyal
