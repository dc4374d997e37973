#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace moyal {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;

    template <std::integral I>
    Rational(I value) : value_(static_cast<long>(value)) {}

    template <std::integral I, std::integral J>
    Rational(I num, J den) {
        if (den == 0)
            throw std::domain_error("Rational: zero denominator");
        value_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
        value_.canonicalize();
    }

    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Parses "a" or "a/b" with an optional leading sign.
    static Rational parse(std::string_view text) {
        std::string s(text);
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        if (q.get_den() == 0)
            throw std::domain_error("Rational: zero denominator");
        q.canonicalize();
        return Rational(std::move(q));
    }

    const mpq_class& value() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_one() const { return value_ == 1; }
    bool is_integer() const { return value_.get_den() == 1; }
    int sign() const { return sgn(value_); }

    Rational abs() const { return Rational(mpq_class(::abs(value_))); }

    Rational pow(int exponent) const {
        if (exponent < 0) {
            if (is_zero())
                throw std::domain_error("Rational: zero to a negative power");
            return Rational(1) / pow(-exponent);
        }
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(exponent));
        mpz_pow_ui(den.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(exponent));
        return Rational(mpq_class(num, den));
    }

    /// Text form `a/b`, with `/1` omitted.
    std::string str() const {
        if (is_integer())
            return value_.get_num().get_str();
        return value_.get_num().get_str() + "/" + value_.get_den().get_str();
    }

    /// LaTeX form `\frac{a}{b}` for the magnitude; sign is kept in front.
    std::string latex() const {
        if (is_integer())
            return value_.get_num().get_str();
        std::string sign_part = sign() < 0 ? "-" : "";
        mpz_class num = ::abs(value_.get_num());
        return sign_part + "\\frac{" + num.get_str() + "}{" + value_.get_den().get_str() + "}";
    }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero())
            throw std::domain_error("Rational: division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class value_{0};
};

inline Rational factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(mpq_class(f));
}

/// i (i-1) ... (i-m+1); valid for negative i, which is what makes p^{-n} derivatives work.
inline Rational falling_factorial(long i, int m) {
    mpz_class acc = 1;
    for (int r = 0; r < m; ++r)
        acc *= i - r;
    return Rational(mpq_class(acc));
}

/// Generalized binomial coefficient C(n, k) = n (n-1) ... (n-k+1) / k!.
inline Rational binomial(long n, int k) {
    if (k < 0)
        return Rational(0);
    return falling_factorial(n, k) / factorial(k);
}

} // namespace moyal
