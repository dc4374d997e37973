#pragma once

#include "moyal/diffalg.hpp"
#include "moyal/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moyal {

/// Which deformed product a computation uses.
enum class ProductKind {
    /// sum_s kappa^s/s! sum_j (-1)^j C(s,j) (d_x^j d_p^{s-j} f)(d_x^{s-j} d_p^j g)
    Moyal,
    /// sum_n kappa^n/n! (d_p^n f)(d_x^n g): the left (standard) pseudodifferential symbol product
    PsdoLeft,
};

inline const char* to_string(ProductKind kind) { return kind == ProductKind::Moyal ? "moyal" : "psdo"; }

/// Truncated Laurent series sum_e a_e(x) p^e with differential-polynomial coefficients.
///
/// Coefficients are stored in left-normal form: a_e stands to the left of p^e, so the
/// stored value is the plain phase-space function. When `floor()` is set, exponents
/// below it are unknown; only exponents >= floor are certified.
class PhaseSymbol {
public:
    using Floor = std::optional<int>;

    PhaseSymbol() = default;
    PhaseSymbol(DiffPoly c) { add_term(0, std::move(c)); }
    PhaseSymbol(Rational c) : PhaseSymbol(DiffPoly(std::move(c))) {}
    template <std::integral I>
    PhaseSymbol(I c) : PhaseSymbol(DiffPoly(c)) {}

    /// c * p^n
    static PhaseSymbol momentum(int n, DiffPoly c = DiffPoly(1)) {
        PhaseSymbol s;
        s.add_term(n, std::move(c));
        return s;
    }

    void add_term(int exponent, const DiffPoly& c) {
        if (floor_ && exponent < *floor_)
            return;
        if (c.is_zero())
            return;
        auto [it, inserted] = coeffs_.try_emplace(exponent, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                coeffs_.erase(it);
        }
    }

    const std::map<int, DiffPoly>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_exact() const { return !floor_.has_value(); }
    Floor floor() const { return floor_; }

    /// Highest exponent that can carry a nonzero coefficient, known or not.
    std::optional<int> top_degree() const {
        std::optional<int> top;
        if (!coeffs_.empty())
            top = coeffs_.rbegin()->first;
        if (floor_)
            top = std::max(top.value_or(*floor_ - 1), *floor_ - 1);
        return top;
    }

    /// Lowest stored exponent (nullopt for zero).
    std::optional<int> bottom_degree() const {
        if (coeffs_.empty())
            return std::nullopt;
        return coeffs_.begin()->first;
    }

    bool is_polynomial() const { return is_exact() && (coeffs_.empty() || coeffs_.begin()->first >= 0); }

    DiffPoly coefficient(int exponent) const {
        if (floor_ && exponent < *floor_)
            throw FloorTooShallow("coefficient of p^" + std::to_string(exponent) + " lies below the tracked floor " +
                                  std::to_string(*floor_));
        auto it = coeffs_.find(exponent);
        return it == coeffs_.end() ? DiffPoly() : it->second;
    }

    /// Drops everything below `new_floor` and marks it untracked.
    PhaseSymbol truncated(int new_floor) const {
        PhaseSymbol out;
        out.floor_ = floor_ ? std::max(*floor_, new_floor) : new_floor;
        for (const auto& [e, c] : coeffs_)
            if (e >= *out.floor_)
                out.coeffs_.emplace(e, c);
        return out;
    }

    template <class F>
    PhaseSymbol map_coefficients(F&& f) const {
        PhaseSymbol out;
        out.floor_ = floor_;
        for (const auto& [e, c] : coeffs_)
            out.add_term(e, f(c));
        return out;
    }

    PhaseSymbol& operator+=(const PhaseSymbol& o) { return *this = combine(*this, o, 1); }
    PhaseSymbol& operator-=(const PhaseSymbol& o) { return *this = combine(*this, o, -1); }
    friend PhaseSymbol operator+(const PhaseSymbol& a, const PhaseSymbol& b) { return combine(a, b, 1); }
    friend PhaseSymbol operator-(const PhaseSymbol& a, const PhaseSymbol& b) { return combine(a, b, -1); }
    friend PhaseSymbol operator-(const PhaseSymbol& a) {
        return a.map_coefficients([](const DiffPoly& c) { return -c; });
    }
    friend PhaseSymbol operator*(const KappaScalar& s, const PhaseSymbol& a) {
        return a.map_coefficients([&](const DiffPoly& c) { return c * s; });
    }
    friend PhaseSymbol operator*(const Rational& s, const PhaseSymbol& a) { return KappaScalar(s) * a; }
    friend PhaseSymbol operator*(const PhaseSymbol& a, const Rational& s) { return KappaScalar(s) * a; }
    friend PhaseSymbol operator*(const DiffPoly& s, const PhaseSymbol& a) {
        return a.map_coefficients([&](const DiffPoly& c) { return s * c; });
    }

    friend bool operator==(const PhaseSymbol& a, const PhaseSymbol& b) {
        return a.floor_ == b.floor_ && a.coeffs_ == b.coeffs_;
    }

    std::vector<RenderedTerm> rendered_terms(bool tex) const {
        std::vector<RenderedTerm> out;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            std::string pw = power_of_p(it->first, tex);
            for (auto t : it->second.rendered_terms(tex)) {
                if (!pw.empty())
                    t.factors.push_back(pw);
                out.push_back(std::move(t));
            }
        }
        return out;
    }

    /// Descending powers of p; a truncated symbol ends in `O(p^{floor-1})`.
    std::string str() const { return render(false); }
    std::string latex() const { return render(true); }

    static std::string power_of_p(int e, bool tex) {
        if (e == 0)
            return "";
        if (e == 1)
            return "p";
        std::string digits = std::to_string(e);
        if (tex && digits.size() > 1)
            return "p^{" + digits + "}";
        return "p^" + digits;
    }

private:
    static PhaseSymbol combine(const PhaseSymbol& a, const PhaseSymbol& b, int sign) {
        PhaseSymbol out;
        if (a.floor_ || b.floor_)
            out.floor_ = std::max(a.floor_.value_or(std::numeric_limits<int>::min()),
                                  b.floor_.value_or(std::numeric_limits<int>::min()));
        for (const auto& [e, c] : a.coeffs_)
            out.add_term(e, c);
        for (const auto& [e, c] : b.coeffs_)
            out.add_term(e, sign > 0 ? c : -c);
        return out;
    }

    std::string render(bool tex) const {
        std::string body = is_zero() && floor_ ? "" : join_terms(rendered_terms(tex), tex);
        if (!floor_)
            return body;
        std::string o = tex ? "O(p^{" + std::to_string(*floor_ - 1) + "})" : "O(p^" + std::to_string(*floor_ - 1) + ")";
        return body.empty() ? o : body + " + " + o;
    }

    std::map<int, DiffPoly> coeffs_;
    Floor floor_;
};

/// Lowest exponent at which f*g is certified, given operand truncations
/// (nullopt when neither operand is truncated).
inline std::optional<int> contamination_bound(const PhaseSymbol& f, const PhaseSymbol& g) {
    std::optional<int> bound;
    auto raise = [&](int b) { bound = bound ? std::max(*bound, b) : b; };
    if (f.floor() && g.top_degree())
        raise(*f.floor() + *g.top_degree());
    if (g.floor() && f.top_degree())
        raise(*g.floor() + *f.top_degree());
    if (f.floor() && g.is_zero() && g.floor())
        raise(*f.floor() + *g.floor() - 1);
    return bound;
}

namespace detail {

constexpr long kUnbounded = std::numeric_limits<long>::max() / 4;

/// Number of x-derivatives after which a coefficient vanishes identically, minus one;
/// kUnbounded when it contains a dependent field.
inline long derivative_span(const DiffPoly& c) {
    long span = 0;
    for (const auto& [m, k] : c.terms()) {
        if (m.has_field())
            return kUnbounded;
        span = std::max<long>(span, m.degree());
    }
    return span;
}

/// Memoized x-derivatives of one coefficient.
class DerivativeCache {
public:
    explicit DerivativeCache(const DiffPoly& c) : span_(derivative_span(c)) { ders_.push_back(c); }
    long span() const { return span_; }
    const DiffPoly& get(long r) {
        while (static_cast<long>(ders_.size()) <= r)
            ders_.push_back(total_x_derivative(ders_.back()));
        return ders_[static_cast<std::size_t>(r)];
    }

private:
    long span_;
    std::vector<DiffPoly> ders_;
};

/// Largest m for which d_p^m p^i is nonzero.
inline long p_span(int i) { return i >= 0 ? i : kUnbounded; }

} // namespace detail

/// The deformed product f * g certified down to `requested_floor` (nullopt: exact result).
inline PhaseSymbol star(const PhaseSymbol& f, const PhaseSymbol& g, ProductKind kind,
                        std::optional<int> requested_floor) {
    std::optional<int> bound = contamination_bound(f, g);
    if (requested_floor) {
        if (bound && *requested_floor < *bound)
            throw FloorTooDeep("requested floor " + std::to_string(*requested_floor) +
                               " is below the certified bound " + std::to_string(*bound));
    } else if (bound) {
        throw FloorTooDeep("exact product requested from truncated operands (certified down to p^" +
                           std::to_string(*bound) + ")");
    }

    std::map<int, detail::DerivativeCache> fd, gd;
    for (const auto& [e, c] : f.terms())
        fd.emplace(e, detail::DerivativeCache(c));
    for (const auto& [e, c] : g.terms())
        gd.emplace(e, detail::DerivativeCache(c));

    std::map<int, DiffPoly> acc;
    for (auto& [i, a] : fd) {
        for (auto& [k, b] : gd) {
            const long fi = detail::p_span(i), fk = detail::p_span(k);
            long smax = kind == ProductKind::Moyal ? std::min(fi, b.span()) + std::min(fk, a.span())
                                                   : std::min(fi, b.span());
            if (requested_floor)
                smax = std::min<long>(smax, static_cast<long>(i) + k - *requested_floor);
            else if (smax >= detail::kUnbounded)
                throw FloorTooDeep("exact product of p^" + std::to_string(i) + " and p^" + std::to_string(k) +
                                   " terms is an infinite series; supply a floor");
            for (long s = 0; s <= smax; ++s) {
                const int e = static_cast<int>(i + k - s);
                if (kind == ProductKind::PsdoLeft) {
                    Rational c = binomial(i, static_cast<int>(s));
                    if (c.is_zero())
                        continue;
                    acc[e].add_product(a.get(0), b.get(s), c, static_cast<int>(s));
                    continue;
                }
                for (long j = 0; j <= s; ++j) {
                    if (s - j > fi || j > fk || j > a.span() || s - j > b.span())
                        continue;
                    Rational c = falling_factorial(i, static_cast<int>(s - j)) * falling_factorial(k, static_cast<int>(j)) /
                                 (factorial(static_cast<int>(j)) * factorial(static_cast<int>(s - j)));
                    if (c.is_zero())
                        continue;
                    if (j % 2 == 1)
                        c = -c;
                    acc[e].add_product(a.get(j), b.get(s - j), c, static_cast<int>(s));
                }
            }
        }
    }

    PhaseSymbol out = requested_floor ? PhaseSymbol().truncated(*requested_floor) : PhaseSymbol();
    for (auto& [e, c] : acc)
        out.add_term(e, c);
    return out;
}

/// Moyal: (f*g - g*f)/(2 kappa).  PsdoLeft: (f o g - g o f)/kappa.
inline PhaseSymbol bracket(const PhaseSymbol& f, const PhaseSymbol& g, ProductKind kind,
                           std::optional<int> requested_floor) {
    PhaseSymbol commutator = star(f, g, kind, requested_floor) - star(g, f, kind, requested_floor);
    const Rational scale = kind == ProductKind::Moyal ? Rational(1, 2) : Rational(1);
    return commutator.map_coefficients(
        [&](const DiffPoly& c) { return divide_by_kappa(c) * KappaScalar(scale); });
}

/// Product with kappa switched off (ordinary multiplication of phase-space functions).
inline PhaseSymbol multiply_commutative(const PhaseSymbol& f, const PhaseSymbol& g) {
    std::optional<int> bound = contamination_bound(f, g);
    PhaseSymbol out = bound ? PhaseSymbol().truncated(*bound) : PhaseSymbol();
    for (const auto& [i, a] : f.terms())
        for (const auto& [k, b] : g.terms())
            if (!bound || i + k >= *bound)
                out.add_term(i + k, a * b);
    return out;
}

inline PhaseSymbol derivative_p(const PhaseSymbol& f) {
    PhaseSymbol out = f.floor() ? PhaseSymbol().truncated(*f.floor() - 1) : PhaseSymbol();
    for (const auto& [e, c] : f.terms())
        if (e != 0)
            out.add_term(e - 1, c * KappaScalar(Rational(e)));
    return out;
}

inline PhaseSymbol derivative_x(const PhaseSymbol& f) {
    return f.map_coefficients([](const DiffPoly& c) { return total_x_derivative(c); });
}

/// {f, g} = f_p g_x - f_x g_p
inline PhaseSymbol poisson_bracket(const PhaseSymbol& f, const PhaseSymbol& g) {
    return multiply_commutative(derivative_p(f), derivative_x(g)) - multiply_commutative(derivative_x(f), derivative_p(g));
}

/// f*f*...*f (n factors) certified down to `requested_floor`.
inline PhaseSymbol star_power(const PhaseSymbol& f, int n, ProductKind kind, std::optional<int> requested_floor) {
    if (n < 0)
        throw InvalidRequest("star_power: negative exponent");
    if (n == 0)
        return PhaseSymbol(1);
    if (n == 1)
        return requested_floor && (!f.floor() || *f.floor() < *requested_floor) ? f.truncated(*requested_floor) : f;
    const int top = f.top_degree().value_or(0);
    PhaseSymbol acc = f;
    for (int j = 2; j <= n; ++j) {
        std::optional<int> fl;
        if (requested_floor)
            fl = *requested_floor - (n - j) * top;
        acc = star(acc, f, kind, fl);
    }
    return acc;
}

/// Terms with p-exponent >= m; (.)_+ is m = 0.
inline PhaseSymbol project(const PhaseSymbol& f, int m) {
    if (f.floor() && *f.floor() > m)
        throw FloorTooShallow("projection onto p^" + std::to_string(m) + " and above needs floor <= " +
                              std::to_string(m));
    PhaseSymbol out;
    for (const auto& [e, c] : f.terms())
        if (e >= m)
            out.add_term(e, c);
    return out;
}

/// Coefficient of p^{-1}.
inline DiffPoly residue(const PhaseSymbol& f) { return f.coefficient(-1); }

/// Equality of traces: residues agree modulo total x-derivatives.
inline bool trace_equal(const PhaseSymbol& f, const PhaseSymbol& g) {
    return equals_mod_total_derivative(residue(f), residue(g));
}

inline PhaseSymbol substitute_kappa(const PhaseSymbol& f, const Rational& value) {
    return f.map_coefficients([&](const DiffPoly& c) { return substitute_kappa(c, value); });
}

inline PhaseSymbol rescale_kappa(const PhaseSymbol& f, const Rational& factor) {
    return f.map_coefficients([&](const DiffPoly& c) { return rescale_kappa(c, factor); });
}

/// True when every coefficient at exponent >= floor agrees (both operands must track that deep).
inline bool agree_above(const PhaseSymbol& a, const PhaseSymbol& b, int floor) {
    int top = std::max(a.top_degree().value_or(floor), b.top_degree().value_or(floor));
    for (int e = floor; e <= top; ++e)
        if (!(a.coefficient(e) == b.coefficient(e)))
            return false;
    return true;
}

} // namespace moyal
