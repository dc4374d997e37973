#pragma once

#include "moyal/errors.hpp"
#include "moyal/scalars.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace moyal {

/// The jet coordinate u_i^{(j)}: field `field`, differentiated `order` times in x.
/// The reserved field kCoordinate is the independent letter x itself, with d/dx x = 1.
struct JetVariable {
    static constexpr std::uint32_t kCoordinate = 0xFFFFFFFFu;

    std::uint32_t field = 0;
    std::uint32_t order = 0;

    static constexpr JetVariable coordinate() { return {kCoordinate, 0}; }

    constexpr bool is_coordinate() const { return field == kCoordinate; }
    constexpr JetVariable base() const { return {field, 0}; }
    constexpr JetVariable derivative(std::uint32_t times = 1) const { return {field, order + times}; }

    friend constexpr auto operator<=>(const JetVariable&, const JetVariable&) = default;

    std::string str() const {
        if (is_coordinate())
            return "x";
        std::string name = field == 0 ? "u" : "u" + std::to_string(field);
        if (order == 0)
            return name;
        if (order <= 3)
            return name + "_" + std::string(order, 'x');
        return name + "^(" + std::to_string(order) + ")";
    }

    std::string latex() const {
        if (is_coordinate())
            return "x";
        if (field == 0) {
            if (order == 0)
                return "u";
            if (order == 1)
                return "u_x";
            if (order <= 3)
                return "u_{" + std::string(order, 'x') + "}";
            return "u^{(" + std::to_string(order) + ")}";
        }
        std::string index = std::to_string(field);
        if (order == 0)
            return "u_{" + index + "}";
        if (order <= 3)
            return "u_{" + index + "," + std::string(order, 'x') + "}";
        return "u_{" + index + "}^{(" + std::to_string(order) + ")}";
    }
};

/// Product of jet variables with positive exponents, sorted by variable.
class DiffMonomial {
public:
    using Factor = std::pair<JetVariable, std::uint32_t>;

    DiffMonomial() = default;
    explicit DiffMonomial(JetVariable v, std::uint32_t exponent = 1) {
        if (exponent > 0)
            factors_.push_back({v, exponent});
        refresh();
    }

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_unit() const { return factors_.empty(); }
    int weight() const { return weight_; }
    std::uint32_t degree() const { return degree_; }

    std::uint32_t exponent(JetVariable v) const {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                                   [](const Factor& f, const JetVariable& x) { return f.first < x; });
        return it != factors_.end() && it->first == v ? it->second : 0;
    }

    bool has_field() const {
        return std::any_of(factors_.begin(), factors_.end(), [](const Factor& f) { return !f.first.is_coordinate(); });
    }

    /// This monomial with the exponent of v lowered by one (v must divide it).
    DiffMonomial divided_by(JetVariable v) const {
        DiffMonomial out = *this;
        for (auto it = out.factors_.begin(); it != out.factors_.end(); ++it) {
            if (it->first == v) {
                if (--it->second == 0)
                    out.factors_.erase(it);
                out.refresh();
                return out;
            }
        }
        throw std::logic_error("DiffMonomial: variable does not divide monomial");
    }

    friend DiffMonomial operator*(const DiffMonomial& a, const DiffMonomial& b) {
        DiffMonomial out;
        out.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() || j != b.factors_.end()) {
            if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first))
                out.factors_.push_back(*i++);
            else if (i == a.factors_.end() || j->first < i->first)
                out.factors_.push_back(*j++);
            else {
                out.factors_.push_back({i->first, i->second + j->second});
                ++i;
                ++j;
            }
        }
        out.refresh();
        return out;
    }

    friend bool operator==(const DiffMonomial& a, const DiffMonomial& b) { return a.factors_ == b.factors_; }

    /// Canonical order: higher weight first, then higher degree, then lexicographic
    /// with larger exponents on earlier variables first.
    friend bool render_before(const DiffMonomial& a, const DiffMonomial& b) {
        if (a.weight_ != b.weight_)
            return a.weight_ > b.weight_;
        if (a.degree_ != b.degree_)
            return a.degree_ > b.degree_;
        std::size_t n = std::min(a.factors_.size(), b.factors_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const auto& fa = a.factors_[i];
            const auto& fb = b.factors_[i];
            if (fa.first != fb.first)
                return fa.first < fb.first;
            if (fa.second != fb.second)
                return fa.second > fb.second;
        }
        return a.factors_.size() > b.factors_.size();
    }

    std::vector<std::string> text_factors() const {
        std::vector<std::string> out;
        for (const auto& [v, e] : factors_)
            out.push_back(e == 1 ? v.str() : v.str() + "^" + std::to_string(e));
        return out;
    }

    std::vector<std::string> latex_factors() const {
        std::vector<std::string> out;
        for (const auto& [v, e] : factors_) {
            std::string name = v.latex();
            if (e == 1) {
                out.push_back(name);
                continue;
            }
            std::string exp = e < 10 ? std::to_string(e) : "{" + std::to_string(e) + "}";
            if (name.find('^') != std::string::npos)
                name = "{" + name + "}";
            out.push_back(name + "^" + exp);
        }
        return out;
    }

private:
    void refresh() {
        weight_ = 0;
        degree_ = 0;
        for (const auto& [v, e] : factors_) {
            int w = v.is_coordinate() ? -1 : static_cast<int>(v.order) + 2;
            weight_ += w * static_cast<int>(e);
            degree_ += e;
        }
    }

    std::vector<Factor> factors_;
    int weight_ = 0;
    std::uint32_t degree_ = 0;
};

struct MonomialOrder {
    bool operator()(const DiffMonomial& a, const DiffMonomial& b) const { return render_before(a, b); }
};

/// Weight assignment: jet (i, j) gets order_weight * j + field_offset, kappa gets kappa_weight.
struct Grading {
    int order_weight = 1;
    int field_offset = 2;
    int kappa_weight = 0;
    int coordinate_weight = -1;

    int weight(const DiffMonomial& m, int kappa_power) const {
        int w = kappa_weight * kappa_power;
        for (const auto& [v, e] : m.factors()) {
            int per = v.is_coordinate() ? coordinate_weight : order_weight * static_cast<int>(v.order) + field_offset;
            w += per * static_cast<int>(e);
        }
        return w;
    }
};

/// u^{(j)} has weight j + 2 and kappa is dimensionless.
inline Grading scaling_grading() { return Grading{1, 2, 0, -1}; }
/// Counts x-derivatives minus kappa powers; every kappa in the star product carries one d/dx.
inline Grading derivative_grading() { return Grading{1, 0, -1, 0}; }

/// A term of a rendered sum: sign plus the magnitude factors in display order.
struct RenderedTerm {
    int sign = 1;
    Rational magnitude{1};
    std::vector<std::string> factors;
};

inline std::string join_terms(const std::vector<RenderedTerm>& terms, bool tex) {
    if (terms.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms) {
        if (first)
            out += t.sign < 0 ? "-" : "";
        else
            out += t.sign < 0 ? " - " : " + ";
        first = false;
        std::vector<std::string> parts;
        if (!t.magnitude.is_one() || t.factors.empty())
            parts.push_back(tex ? t.magnitude.latex() : t.magnitude.str());
        parts.insert(parts.end(), t.factors.begin(), t.factors.end());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i > 0)
                out += tex ? " " : "*";
            out += parts[i];
        }
    }
    return out;
}

/// Differential polynomial: finite sum of kappa-polynomial coefficients times jet monomials.
class DiffPoly {
public:
    using TermMap = std::map<DiffMonomial, KappaScalar, MonomialOrder>;

    DiffPoly() = default;
    DiffPoly(KappaScalar c) { add_term(DiffMonomial(), std::move(c)); }
    DiffPoly(Rational c) : DiffPoly(KappaScalar(std::move(c))) {}
    template <std::integral I>
    DiffPoly(I c) : DiffPoly(Rational(c)) {}

    static DiffPoly variable(JetVariable v) {
        DiffPoly out;
        out.add_term(DiffMonomial(v), KappaScalar(1));
        return out;
    }
    /// u_i^{(order)}
    static DiffPoly field(std::uint32_t index, std::uint32_t order = 0) { return variable({index, order}); }
    static DiffPoly coordinate() { return variable(JetVariable::coordinate()); }

    void add_term(const DiffMonomial& m, KappaScalar c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.try_emplace(m, std::move(c));
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    /// this += scale * kappa^kappa_power * a * b, without building temporaries for the product.
    void add_product(const DiffPoly& a, const DiffPoly& b, const Rational& scale, int kappa_power) {
        if (scale.is_zero())
            return;
        for (const auto& [ma, ca] : a.terms_) {
            KappaScalar sa = (ca * scale).shift(kappa_power);
            for (const auto& [mb, cb] : b.terms_)
                add_term(ma * mb, sa * cb);
        }
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit()); }
    KappaScalar constant_term() const {
        auto it = terms_.find(DiffMonomial());
        return it == terms_.end() ? KappaScalar() : it->second;
    }
    /// Part of the polynomial involving no dependent field (constants and powers of x).
    DiffPoly field_free_part() const {
        DiffPoly out;
        for (const auto& [m, c] : terms_)
            if (!m.has_field())
                out.add_term(m, c);
        return out;
    }

    std::set<std::uint32_t> fields() const {
        std::set<std::uint32_t> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.factors())
                if (!v.is_coordinate())
                    out.insert(v.field);
        return out;
    }

    /// Highest derivative order of the given field, or -1 if absent.
    int max_order(std::uint32_t field_index) const {
        int best = -1;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m.factors())
                if (v.field == field_index)
                    best = std::max(best, static_cast<int>(v.order));
        return best;
    }

    template <class F>
    DiffPoly map_coefficients(F&& f) const {
        DiffPoly out;
        for (const auto& [m, c] : terms_)
            out.add_term(m, f(c));
        return out;
    }

    DiffPoly& operator+=(const DiffPoly& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    DiffPoly& operator-=(const DiffPoly& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    DiffPoly& operator*=(const KappaScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_)
            c *= s;
        return *this;
    }

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator-(DiffPoly a) { return a *= KappaScalar(-1); }
    friend DiffPoly operator*(DiffPoly a, const KappaScalar& s) { return a *= s; }
    friend DiffPoly operator*(const KappaScalar& s, DiffPoly a) { return a *= s; }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly out;
        out.add_product(a, b, Rational(1), 0);
        return out;
    }
    DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }

    DiffPoly pow(unsigned e) const {
        DiffPoly acc(1);
        for (unsigned i = 0; i < e; ++i)
            acc *= *this;
        return acc;
    }

    friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
        if (a.terms_.size() != b.terms_.size())
            return false;
        auto i = a.terms_.begin();
        for (auto j = b.terms_.begin(); j != b.terms_.end(); ++i, ++j)
            if (!(i->first == j->first) || !(i->second == j->second))
                return false;
        return true;
    }

    /// Expanded terms, one per (monomial, kappa power), in canonical order.
    std::vector<RenderedTerm> rendered_terms(bool tex) const {
        std::vector<RenderedTerm> out;
        for (const auto& [m, c] : terms_) {
            const auto& coeffs = c.coefficients();
            for (std::size_t e = 0; e < coeffs.size(); ++e) {
                if (coeffs[e].is_zero())
                    continue;
                RenderedTerm t;
                t.sign = coeffs[e].sign();
                t.magnitude = coeffs[e].abs();
                if (e > 0) {
                    std::string k = tex ? "\\kappa" : "k";
                    if (e > 1)
                        k += "^" + (tex && e >= 10 ? "{" + std::to_string(e) + "}" : std::to_string(e));
                    t.factors.push_back(k);
                }
                auto f = tex ? m.latex_factors() : m.text_factors();
                t.factors.insert(t.factors.end(), f.begin(), f.end());
                out.push_back(std::move(t));
            }
        }
        return out;
    }

    std::string str() const { return join_terms(rendered_terms(false), false); }
    std::string latex() const { return join_terms(rendered_terms(true), true); }

    /// Weight shared by every term, if the polynomial is homogeneous (nullopt for zero or mixed).
    std::optional<int> homogeneous_weight(const Grading& g) const {
        std::optional<int> w;
        for (const auto& [m, c] : terms_) {
            const auto& coeffs = c.coefficients();
            for (std::size_t e = 0; e < coeffs.size(); ++e) {
                if (coeffs[e].is_zero())
                    continue;
                int tw = g.weight(m, static_cast<int>(e));
                if (w && *w != tw)
                    return std::nullopt;
                w = tw;
            }
        }
        return w;
    }

private:
    TermMap terms_;
};

/// The derivation d/dx: u_i^{(j)} -> u_i^{(j+1)}, x -> 1, extended by Leibniz.
inline DiffPoly total_x_derivative(const DiffPoly& f) {
    DiffPoly out;
    for (const auto& [m, c] : f.terms()) {
        for (const auto& [v, e] : m.factors()) {
            DiffMonomial rest = m.divided_by(v);
            KappaScalar coeff = c * Rational(static_cast<long>(e));
            if (v.is_coordinate())
                out.add_term(rest, coeff);
            else
                out.add_term(rest * DiffMonomial(v.derivative()), coeff);
        }
    }
    return out;
}

inline DiffPoly total_x_derivative(const DiffPoly& f, unsigned times) {
    DiffPoly out = f;
    for (unsigned i = 0; i < times && !out.is_zero(); ++i)
        out = total_x_derivative(out);
    return out;
}

/// Formal partial derivative with respect to one jet coordinate.
inline DiffPoly partial(const DiffPoly& f, JetVariable v) {
    DiffPoly out;
    for (const auto& [m, c] : f.terms()) {
        std::uint32_t e = m.exponent(v);
        if (e > 0)
            out.add_term(m.divided_by(v), c * Rational(static_cast<long>(e)));
    }
    return out;
}

/// Euler operator: sum_i (-1)^i D^i (df / du^{(i)}) for the field of `v` (order must be 0).
inline DiffPoly variational_derivative(const DiffPoly& f, JetVariable v) {
    if (v.order != 0 || v.is_coordinate())
        throw std::invalid_argument("variational_derivative: expects a base field variable");
    DiffPoly out;
    int top = f.max_order(v.field);
    for (int i = 0; i <= top; ++i) {
        DiffPoly term = total_x_derivative(partial(f, {v.field, static_cast<std::uint32_t>(i)}), static_cast<unsigned>(i));
        if (i % 2 == 0)
            out += term;
        else
            out -= term;
    }
    return out;
}

/// f - g lies in the image of d/dx: no field-free part and every Euler derivative vanishes.
inline bool equals_mod_total_derivative(const DiffPoly& f, const DiffPoly& g) {
    DiffPoly d = f - g;
    if (!d.field_free_part().is_zero())
        return false;
    for (std::uint32_t field : d.fields())
        if (!variational_derivative(d, {field, 0}).is_zero())
            return false;
    return true;
}

inline DiffPoly substitute_kappa(const DiffPoly& f, const Rational& value) {
    return f.map_coefficients([&](const KappaScalar& c) { return KappaScalar(substitute_kappa(c, value)); });
}

/// kappa -> factor * kappa
inline DiffPoly rescale_kappa(const DiffPoly& f, const Rational& factor) {
    return f.map_coefficients([&](const KappaScalar& c) { return c.rescale(factor); });
}

/// Exact division of every coefficient by kappa^times.
inline DiffPoly divide_by_kappa(const DiffPoly& f, int times = 1) {
    return f.map_coefficients([&](const KappaScalar& c) {
        if (c.valuation() < times)
            throw InexactKappaDivision("kappa does not divide " + f.str());
        return c.shift(-times);
    });
}

/// Simultaneous substitution u_i -> replacement_i, with u_i^{(r)} -> D^r replacement_i.
inline DiffPoly substitute_fields(const DiffPoly& f, const std::map<std::uint32_t, DiffPoly>& replacement) {
    std::map<JetVariable, DiffPoly> cache;
    auto image = [&](JetVariable v) -> const DiffPoly& {
        auto it = cache.find(v);
        if (it != cache.end())
            return it->second;
        auto r = replacement.find(v.field);
        DiffPoly value = (v.is_coordinate() || r == replacement.end()) ? DiffPoly::variable(v)
                                                                        : total_x_derivative(r->second, v.order);
        return cache.emplace(v, std::move(value)).first->second;
    };
    DiffPoly out;
    for (const auto& [m, c] : f.terms()) {
        DiffPoly term(c);
        for (const auto& [v, e] : m.factors())
            term *= image(v).pow(e);
        out += term;
    }
    return out;
}

} // namespace moyal
