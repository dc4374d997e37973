#pragma once

#include "moyal/errors.hpp"
#include "moyal/rational.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace moyal {

/// Commutative polynomial over Rational in letters of type Var (time indices,
/// Hirota letters, or the unknowns F_mn).
template <class Var>
class MultiPoly {
public:
    using Monomial = std::map<Var, unsigned>;

    struct Order {
        bool operator()(const Monomial& a, const Monomial& b) const {
            unsigned da = 0, db = 0;
            for (const auto& [v, e] : a)
                da += e;
            for (const auto& [v, e] : b)
                db += e;
            if (da != db)
                return da > db;
            return a > b;
        }
    };
    using TermMap = std::map<Monomial, Rational, Order>;

    MultiPoly() = default;
    MultiPoly(Rational c) { add_term({}, std::move(c)); }
    template <std::integral I>
    MultiPoly(I c) : MultiPoly(Rational(c)) {}

    static MultiPoly variable(Var v, unsigned exponent = 1) {
        MultiPoly out;
        out.add_term(Monomial{{v, exponent}}, Rational(1));
        return out;
    }

    void add_term(Monomial m, const Rational& c) {
        if (c.is_zero())
            return;
        for (auto it = m.begin(); it != m.end();)
            it = it->second == 0 ? m.erase(it) : std::next(it);
        auto [it, inserted] = terms_.try_emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    std::set<Var> variables() const {
        std::set<Var> out;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m)
                out.insert(v);
        return out;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (const auto& [m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator-(const MultiPoly& a) { return a * Rational(-1); }
    friend MultiPoly operator*(const MultiPoly& a, const Rational& s) {
        MultiPoly out;
        for (const auto& [m, c] : a.terms_)
            out.add_term(m, c * s);
        return out;
    }
    friend MultiPoly operator*(const Rational& s, const MultiPoly& a) { return a * s; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (const auto& [v, e] : mb)
                    m[v] += e;
                out.add_term(std::move(m), ca * cb);
            }
        return out;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
    MultiPoly pow(unsigned e) const {
        MultiPoly acc(1);
        for (unsigned i = 0; i < e; ++i)
            acc *= *this;
        return acc;
    }
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.terms_ == b.terms_; }

    /// Replaces each letter by a polynomial (letters missing from the map are kept).
    template <class W>
    MultiPoly<W> substitute(const std::function<MultiPoly<W>(const Var&)>& image) const {
        MultiPoly<W> out;
        for (const auto& [m, c] : terms_) {
            MultiPoly<W> term(c);
            for (const auto& [v, e] : m)
                term *= image(v).pow(e);
            out += term;
        }
        return out;
    }

    Rational evaluate(const std::function<Rational(const Var&)>& value) const {
        Rational acc;
        for (const auto& [m, c] : terms_) {
            Rational term = c;
            for (const auto& [v, e] : m)
                term *= value(v).pow(static_cast<int>(e));
            acc += term;
        }
        return acc;
    }

    /// `name(v, tex)` renders one letter.
    std::string render(const std::function<std::string(const Var&, bool)>& name, bool tex) const {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            out += first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
            first = false;
            Rational mag = c.abs();
            std::vector<std::string> parts;
            if (!mag.is_one() || m.empty())
                parts.push_back(tex ? mag.latex() : mag.str());
            for (const auto& [v, e] : m) {
                std::string s = name(v, tex);
                if (e > 1)
                    s += tex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
                parts.push_back(s);
            }
            for (std::size_t i = 0; i < parts.size(); ++i)
                out += (i ? (tex ? " " : "*") : "") + parts[i];
        }
        return out;
    }

private:
    TermMap terms_;
};

/// Polynomials in the times t_1, t_2, ...
using TimePoly = MultiPoly<int>;
/// Polynomials in the Hirota letters D_1, D_2, ...
using HirotaPoly = MultiPoly<int>;

inline std::string time_name(const int& j, bool tex) {
    return tex ? "t_{" + std::to_string(j) + "}" : "t" + std::to_string(j);
}
inline std::string hirota_name(const int& j, bool tex) {
    return tex ? "D_{" + std::to_string(j) + "}" : "D" + std::to_string(j);
}

/// p_0 .. p_N with exp(sum t_n lambda^n) = sum p_j lambda^j, via n p_n = sum_k k t_k p_{n-k}.
inline std::vector<TimePoly> schur_polys(int N) {
    std::vector<TimePoly> p{TimePoly(1)};
    for (int n = 1; n <= N; ++n) {
        TimePoly acc;
        for (int k = 1; k <= n; ++k)
            acc += TimePoly::variable(k) * p[static_cast<std::size_t>(n - k)] * Rational(k);
        p.push_back(acc * Rational(1, n));
    }
    return p;
}

/// Exponential sum: sum_c c * exp(sum_j k_j t_j). Wave vectors store only nonzero entries.
class ExpSum {
public:
    using Wave = std::map<int, Rational>;

    ExpSum() = default;
    ExpSum(Rational c) { add_term({}, std::move(c)); }

    static ExpSum exponential(const Wave& k, Rational c = Rational(1)) {
        ExpSum out;
        out.add_term(k, std::move(c));
        return out;
    }

    void add_term(Wave k, const Rational& c) {
        if (c.is_zero())
            return;
        for (auto it = k.begin(); it != k.end();)
            it = it->second.is_zero() ? k.erase(it) : std::next(it);
        auto [it, inserted] = terms_.try_emplace(std::move(k), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    const std::map<Wave, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend ExpSum operator+(ExpSum a, const ExpSum& b) {
        for (const auto& [k, c] : b.terms_)
            a.add_term(k, c);
        return a;
    }
    friend ExpSum operator*(const Rational& s, const ExpSum& a) {
        ExpSum out;
        for (const auto& [k, c] : a.terms_)
            out.add_term(k, s * c);
        return out;
    }
    friend bool operator==(const ExpSum& a, const ExpSum& b) { return a.terms_ == b.terms_; }

    static Wave add(const Wave& a, const Wave& b, int sign = 1) {
        Wave out = a;
        for (const auto& [j, v] : b)
            out[j] += sign > 0 ? v : -v;
        return out;
    }

    /// `c*exp(k1*t1 + k2*t2) + ...`; an empty sum is `0`.
    std::string str() const {
        if (terms_.empty())
            return "0";
        std::string out;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            out += first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
            first = false;
            if (k.empty()) {
                out += c.abs().str();
                continue;
            }
            if (!c.abs().is_one())
                out += c.abs().str() + "*";
            std::string arg;
            for (const auto& [j, v] : k) {
                if (!arg.empty())
                    arg += v.sign() < 0 ? " - " : " + ";
                else if (v.sign() < 0)
                    arg += "-";
                arg += (v.abs().is_one() ? "" : v.abs().str() + "*") + time_name(j, false);
            }
            out += "exp(" + arg + ")";
        }
        return out;
    }

private:
    std::map<Wave, Rational> terms_;
};

/// Bilinear extension of prod D_j^{m_j} (e^{k.t}, e^{l.t}) = prod (k_j - l_j)^{m_j} e^{(k+l).t}.
inline ExpSum hirota_apply(const HirotaPoly& P, const ExpSum& a, const ExpSum& b) {
    ExpSum out;
    for (const auto& [k, ca] : a.terms())
        for (const auto& [l, cb] : b.terms()) {
            const ExpSum::Wave diff = ExpSum::add(k, l, -1);
            Rational value = P.evaluate([&](const int& j) {
                auto it = diff.find(j);
                return it == diff.end() ? Rational(0) : it->second;
            });
            out.add_term(ExpSum::add(k, l), ca * cb * value);
        }
    return out;
}

/// D_1 D_n - 2 p_{n+1}(D_1, D_2/2, D_3/3, ...)
inline HirotaPoly kp_bilinear_operator(int n) {
    if (n < 2)
        throw InvalidRequest("Hirota equations are indexed by n >= 2");
    TimePoly p = schur_polys(n + 1).back();
    HirotaPoly scaled = p.substitute<int>([](const int& j) { return HirotaPoly::variable(j) * Rational(1, j); });
    return HirotaPoly::variable(1) * HirotaPoly::variable(n) - scaled * Rational(2);
}

inline ExpSum kp_bilinear_residual(int n, const ExpSum& tau) {
    return hirota_apply(kp_bilinear_operator(n), tau, tau);
}

/// eta_j = a^j - b^j for j = 1..max_time: the one-soliton wave vector.
inline ExpSum::Wave soliton_wave(const Rational& a, const Rational& b, int max_time) {
    ExpSum::Wave k;
    for (int j = 1; j <= max_time; ++j)
        k[j] = a.pow(j) - b.pow(j);
    return k;
}

/// 1 + c e^{eta(a,b)}
inline ExpSum one_soliton(const Rational& a, const Rational& b, const Rational& c, int max_time) {
    return ExpSum(Rational(1)) + ExpSum::exponential(soliton_wave(a, b, max_time), c);
}

/// 1 + e^{eta_1} + e^{eta_2} + A e^{eta_1 + eta_2} with A = (a1-a2)(b1-b2)/((a1-b2)(b1-a2)).
inline ExpSum two_soliton(const Rational& a1, const Rational& b1, const Rational& a2, const Rational& b2, int max_time) {
    ExpSum::Wave k1 = soliton_wave(a1, b1, max_time), k2 = soliton_wave(a2, b2, max_time);
    Rational A = (a1 - a2) * (b1 - b2) / ((a1 - b2) * (b1 - a2));
    return ExpSum(Rational(1)) + ExpSum::exponential(k1) + ExpSum::exponential(k2) +
           ExpSum::exponential(ExpSum::add(k1, k2), A);
}

// ---------------------------------------------------------------------------
// Dispersionless Fay identity

/// The unknown F_{m,n}.
using FIndex = std::pair<int, int>;
using FPoly = MultiPoly<FIndex>;

inline std::string f_name(const FIndex& f, bool) {
    return "F_{" + std::to_string(f.first) + "," + std::to_string(f.second) + "}";
}
inline std::string p_name(const FIndex& f, bool tex) {
    return tex ? "P_{" + std::to_string(f.second) + "}" : "P_" + std::to_string(f.second);
}

inline FPoly F(int m, int n) { return FPoly::variable({m, n}); }

/// Truncated series in X = 1/mu and Y = 1/lambda with FPoly coefficients.
class FaySeries {
public:
    explicit FaySeries(int order) : order_(order) {}

    void add(int i, int j, const FPoly& c) {
        if (i + j > order_ || c.is_zero())
            return;
        FPoly& slot = coeffs_[{i, j}];
        slot += c;
        if (slot.is_zero())
            coeffs_.erase({i, j});
    }
    FPoly coefficient(int i, int j) const {
        auto it = coeffs_.find({i, j});
        return it == coeffs_.end() ? FPoly() : it->second;
    }
    const std::map<std::pair<int, int>, FPoly>& terms() const { return coeffs_; }
    int order() const { return order_; }

    friend FaySeries operator*(const FaySeries& a, const FaySeries& b) {
        FaySeries out(std::min(a.order_, b.order_));
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_)
                out.add(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return out;
    }
    FaySeries& operator+=(const FaySeries& o) {
        for (const auto& [e, c] : o.coeffs_)
            add(e.first, e.second, c);
        return *this;
    }
    FaySeries scaled(const Rational& s) const {
        FaySeries out(order_);
        for (const auto& [e, c] : coeffs_)
            out.add(e.first, e.second, c * s);
        return out;
    }

private:
    int order_;
    std::map<std::pair<int, int>, FPoly> coeffs_;
};

/// S with log(1 + S) the right side of the Fay identity:
/// -((mu^-n - lambda^-n)/(mu - lambda)) = X Y h_{n-1}(X, Y).
inline FaySeries fay_argument(int order) {
    FaySeries S(order);
    for (int n = 1; n + 1 <= order; ++n)
        for (int a = 0; a <= n - 1; ++a)
            S.add(1 + a, 1 + (n - 1 - a), F(1, n) * Rational(1, n));
    return S;
}

/// log(1 + S) for S without constant term.
inline FaySeries log_one_plus(const FaySeries& S) {
    FaySeries out(S.order());
    FaySeries power = S;
    for (int r = 1; r <= S.order() && !power.terms().empty(); ++r) {
        out += power.scaled(Rational(r % 2 == 1 ? 1 : -1, r));
        power = power * S;
    }
    return out;
}

struct FRelation {
    int m = 0;
    int n = 0;
    FPoly rhs;
};

struct RelationSet {
    int order = 0;
    std::vector<FRelation> relations;
    /// Coefficients with m = 1 or n = 1 that reduced to F_{a,b} = F_{a,b} (after F_{m,1} = F_{1,m}).
    std::vector<FIndex> tautologies;

    const FRelation* find(int m, int n) const {
        for (const auto& r : relations)
            if (r.m == m && r.n == n)
                return &r;
        return nullptr;
    }
};

/// F_{m,1} -> F_{1,m}: second derivatives of the free energy are symmetric.
inline FPoly symmetrize_index_one(const FPoly& p) {
    return p.substitute<FIndex>([](const FIndex& f) { return f.second == 1 && f.first > 1 ? F(1, f.first) : F(f.first, f.second); });
}

/// Matches sum X^m Y^n F_mn/(mn) against log(1 + S) through total degree `order`.
inline RelationSet dfay_relations(int order) {
    if (order < 1)
        throw InvalidRequest("dFay order must be positive");
    FaySeries rhs = log_one_plus(fay_argument(order));
    RelationSet out;
    out.order = order;
    for (int total = 2; total <= order; ++total)
        for (int m = 1; m < total; ++m) {
            const int n = total - m;
            FPoly value = rhs.coefficient(m, n) * Rational(m * n);
            if (m == 1 || n == 1) {
                FPoly diff = symmetrize_index_one(F(m, n) - value);
                if (!diff.is_zero())
                    throw InconsistentExpansion("coefficient (" + std::to_string(m) + "," + std::to_string(n) +
                                                ") is not tautological: " + diff.render(f_name, false));
                out.tautologies.push_back({m, n});
                continue;
            }
            out.relations.push_back({m, n, value});
        }
    return out;
}

/// Rewrites F_{1,j} as j P_{j+1}.
inline MultiPoly<FIndex> to_p_variables(const FPoly& p) {
    return p.substitute<FIndex>([](const FIndex& f) {
        if (f.first != 1)
            return F(f.first, f.second);
        return FPoly::variable({0, f.second + 1}) * Rational(f.second);
    });
}

/// Eliminates every F_{m,n} with m, n >= 2 using `rels`, and F_{m,1} by symmetry.
inline FPoly reduce_with(const FPoly& p, const RelationSet& rels) {
    return symmetrize_index_one(p.substitute<FIndex>([&](const FIndex& f) {
        if (f.first >= 2 && f.second >= 2) {
            if (const FRelation* r = rels.find(f.first, f.second))
                return r->rhs;
            throw InvalidRequest("no dFay relation for " + f_name(f, false) + " at order " + std::to_string(rels.order));
        }
        return F(f.first, f.second);
    }));
}

enum class DHirotaStatus { Tautology, Identity, Residual };

inline const char* to_string(DHirotaStatus s) {
    switch (s) {
    case DHirotaStatus::Tautology: return "tautology";
    case DHirotaStatus::Identity: return "identity";
    default: return "residual";
    }
}

struct DHirotaEntry {
    int i = 0;
    int j = 0;
    FPoly lhs;
    FPoly rhs;
    DHirotaStatus status = DHirotaStatus::Residual;
    /// lhs - rhs after reduction (zero unless the status is Residual).
    FPoly residual;
};

/// Z_j = sum_{m+n=j} F_mn/(mn)
inline FPoly z_letter(int j) {
    FPoly z;
    for (int m = 1; m < j; ++m)
        z += F(m, j - m) * Rational(1, m * (j - m));
    return z;
}

/// Reference closed form F_ij = p_{j+1}(0, Z_2, ..., Z_{j+1}), for every i, j >= 1 with i + j <= order.
inline std::vector<DHirotaEntry> dhirota_check(int order) {
    std::vector<DHirotaEntry> out;
    const int need = order + 1;
    RelationSet rels = dfay_relations(need);
    std::vector<TimePoly> p = schur_polys(need);
    for (int i = 1; i < order; ++i)
        for (int j = 1; i + j <= order; ++j) {
            FPoly rhs = p[static_cast<std::size_t>(j + 1)].substitute<FIndex>(
                [](const int& t) { return t == 1 ? FPoly() : z_letter(t); });
            DHirotaEntry e{i, j, F(i, j), rhs, DHirotaStatus::Residual, {}};
            FPoly sym = symmetrize_index_one(e.lhs - e.rhs);
            if (sym.is_zero()) {
                e.status = DHirotaStatus::Tautology;
            } else {
                e.residual = reduce_with(e.lhs - e.rhs, rels);
                e.status = e.residual.is_zero() ? DHirotaStatus::Identity : DHirotaStatus::Residual;
            }
            out.push_back(std::move(e));
        }
    return out;
}

} // namespace moyal
