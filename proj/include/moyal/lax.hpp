#pragma once

#include "moyal/symbols.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moyal {

/// Monic Lax symbol p^n + lower terms. KP-type operators carry a truncated negative tail
/// and remember how to regenerate it deeper (`kp_tail`).
struct LaxOperator {
    int order = 2;
    PhaseSymbol symbol;
    std::string hierarchy = "custom";
    std::optional<int> kp_tail;

    /// L = p^2 + u
    static LaxOperator kdv() {
        return {2, PhaseSymbol::momentum(2) + PhaseSymbol(DiffPoly::field(0)), "kdv", std::nullopt};
    }

    /// L = p^n + u_{n-2} p^{n-2} + ... + u_0, one field per slot (field index = slot exponent).
    /// n = 2 is KdV with its single field u; n = 3 is Boussinesq.
    static LaxOperator gelfand_dickey(int n) {
        if (n < 2)
            throw InvalidRequest("Gelfand-Dickey operators need order >= 2");
        if (n == 2)
            return kdv();
        PhaseSymbol s = PhaseSymbol::momentum(n);
        for (int i = 0; i <= n - 2; ++i)
            s.add_term(i, DiffPoly::field(static_cast<std::uint32_t>(n - 1 - i)));
        return {n, s, n == 3 ? "boussinesq" : "gd" + std::to_string(n), std::nullopt};
    }

    /// Lambda = p + sum_{j=0}^{D-1} u_j p^{-j-1}, tracked down to p^{-D}.
    static LaxOperator kp(int tail_depth) {
        if (tail_depth < 1)
            throw InvalidRequest("KP tail depth must be positive");
        PhaseSymbol s = PhaseSymbol().truncated(-tail_depth);
        s.add_term(1, DiffPoly(1));
        for (int j = 0; j < tail_depth; ++j)
            s.add_term(-j - 1, DiffPoly::field(static_cast<std::uint32_t>(j)));
        return {1, s, "kp", tail_depth};
    }

    /// Any monic symbol of top degree n.
    static LaxOperator from_symbol(const PhaseSymbol& s) {
        auto top = s.terms().empty() ? std::nullopt : std::optional<int>(s.terms().rbegin()->first);
        if (!top || *top < 1 || !(s.terms().rbegin()->second == DiffPoly(1)))
            throw InvalidRequest("Lax symbol must be monic with positive top degree: " + s.str());
        return {*top, s, "custom", std::nullopt};
    }

    /// The same operator with a deeper regenerated tail (KP only; others are returned unchanged).
    LaxOperator deepened(int extra) const {
        if (!kp_tail)
            return *this;
        return kp(*kp_tail + extra);
    }
};

/// R = p + a_0 + sum_{i=1}^{depth} a_i p^{-i} with R^n = L above the tracked floor.
inline PhaseSymbol nth_root(const LaxOperator& L, int depth, ProductKind kind = ProductKind::Moyal) {
    const int n = L.order;
    if (depth < 0)
        throw InvalidRequest("root depth must be non-negative");
    if (n == 1)
        return L.symbol.floor() && *L.symbol.floor() > -depth ? L.symbol
               : L.symbol.truncated(std::min(-depth, L.symbol.floor().value_or(-depth)));
    // Exact partial root; slot a_i is provisionally zero while it is being solved.
    PhaseSymbol root = PhaseSymbol::momentum(1);
    for (int i = 0; i <= depth; ++i) {
        const int target = n - 1 - i;
        if (L.symbol.floor() && target < *L.symbol.floor())
            throw FloorTooDeep("root depth " + std::to_string(depth) + " needs the Lax symbol down to p^" +
                               std::to_string(target));
        PhaseSymbol power = star_power(root.truncated(-i), n, kind, target);
        DiffPoly a = (L.symbol.coefficient(target) - power.coefficient(target)) * KappaScalar(Rational(1, n));
        root.add_term(-i, a);
    }
    return root.truncated(-depth);
}

/// L^{k/n} as the k-fold product of the n-th root, certified down to p^{k-1-depth}.
/// A whole power of L is returned exactly.
inline PhaseSymbol frac_power(const LaxOperator& L, int k, int depth, ProductKind kind = ProductKind::Moyal) {
    if (k < 1)
        throw InvalidRequest("fractional power index must be positive");
    if (k % L.order == 0 && L.symbol.is_exact())
        return star_power(L.symbol, k / L.order, kind, std::nullopt);
    PhaseSymbol root = nth_root(L, depth, kind);
    return star_power(root, k, kind, k - 1 - depth);
}

/// Right-hand sides d u_i / d t_k keyed by field index.
struct FlowResult {
    std::string hierarchy;
    int k = 0;
    int m = 0;
    std::map<std::uint32_t, DiffPoly> rhs;

    friend bool operator==(const FlowResult&, const FlowResult&) = default;
};

struct FlowOptions {
    int m = 0;
    /// Use {L, B} instead of {B, L}: the same hierarchy with t_k -> -t_k.
    bool time_reversed = false;
    /// Divide every right-hand side by k (rescaled times tau_k = k t_k).
    bool normalize = false;
    ProductKind kind = ProductKind::Moyal;
    /// Root depth; defaults to k + n.
    std::optional<int> depth;
};

/// Time derivative of a differential polynomial given the flows of its fields.
/// Fields without a flow are treated as time independent.
inline DiffPoly time_derivative(const DiffPoly& h, const std::map<std::uint32_t, DiffPoly>& flow) {
    DiffPoly out;
    std::map<JetVariable, DiffPoly> cache;
    for (const auto& [mono, c] : h.terms()) {
        for (const auto& [v, e] : mono.factors()) {
            auto it = flow.find(v.field);
            if (v.is_coordinate() || it == flow.end())
                continue;
            auto cached = cache.find(v);
            if (cached == cache.end())
                cached = cache.emplace(v, total_x_derivative(it->second, v.order)).first;
            DiffPoly rest;
            rest.add_term(mono.divided_by(v), c * KappaScalar(Rational(static_cast<long>(e))));
            out += rest * cached->second;
        }
    }
    return out;
}

namespace detail {

/// Splits c into r * u_f (the only term containing field f) plus a part free of f.
/// Returns nullopt when f enters in any other way.
inline std::optional<Rational> linear_slot(const DiffPoly& c, std::uint32_t f, DiffPoly& rest) {
    std::optional<Rational> r;
    rest = DiffPoly();
    for (const auto& [m, k] : c.terms()) {
        bool has_f = false;
        for (const auto& [v, e] : m.factors())
            has_f = has_f || (!v.is_coordinate() && v.field == f);
        if (!has_f) {
            rest.add_term(m, k);
            continue;
        }
        if (m.factors().size() != 1 || m.factors()[0].second != 1 || m.factors()[0].first.order != 0 ||
            !k.is_constant() || r)
            return std::nullopt;
        r = k.constant_term();
    }
    return r;
}

} // namespace detail

/// d L / d t_k = { (L^{k/n})_{>=m}, L } matched slot by slot against the coefficients of L.
inline FlowResult lax_flow(const LaxOperator& L0, int k, const FlowOptions& opt = {}) {
    const int n = L0.order;
    if (opt.m < 0 || opt.m > 2)
        throw InvalidRequest("projection index m must be 0, 1 or 2");
    if (k < 1)
        throw InvalidRequest("flow index must be positive");
    if (k % n == 0 && L0.symbol.is_exact())
        throw InvalidRequest("flow index " + std::to_string(k) + " is a multiple of the Lax order " + std::to_string(n));

    // The bracket with a degree-k generator loses k levels of tail certification.
    const LaxOperator L = L0.deepened(k);
    const int depth = opt.depth.value_or(k + n);
    PhaseSymbol B = project(frac_power(L, k, depth, opt.kind), opt.m);

    std::optional<int> floor = L0.symbol.floor();
    PhaseSymbol dL = opt.time_reversed ? bracket(L.symbol, B, opt.kind, floor) : bracket(B, L.symbol, opt.kind, floor);
    if (opt.normalize)
        dL = Rational(1, k) * dL;

    FlowResult result{L0.hierarchy, k, opt.m, {}};
    const int lowest = std::min(floor.value_or(0), dL.bottom_degree().value_or(0));
    for (int e = n - 1; e >= lowest; --e) {
        const DiffPoly rhs = dL.coefficient(e);
        const DiffPoly c = floor && e < *floor ? DiffPoly() : L.symbol.coefficient(e);
        std::set<std::uint32_t> unsolved;
        for (std::uint32_t f : c.fields())
            if (!result.rhs.count(f))
                unsolved.insert(f);
        if (e > n - 2 && !rhs.is_zero())
            throw InconsistentFlow("bracket has a nonzero p^" + std::to_string(e) + " term: " + rhs.str());
        if (unsolved.empty()) {
            if (!(time_derivative(c, result.rhs) == rhs))
                throw InconsistentFlow("p^" + std::to_string(e) + " slot is not consistent with the flow: " + rhs.str());
            continue;
        }
        // Pick the field that enters linearly and undifferentiated.
        bool solved = false;
        for (std::uint32_t f : unsolved) {
            DiffPoly rest;
            auto r = detail::linear_slot(c, f, rest);
            if (!r || r->is_zero())
                continue;
            bool others = false;
            for (std::uint32_t g : rest.fields())
                others = others || (!result.rhs.count(g) && unsolved.count(g));
            if (others)
                continue;
            result.rhs[f] = (rhs - time_derivative(rest, result.rhs)) * KappaScalar(Rational(1) / *r);
            solved = true;
            break;
        }
        if (!solved)
            throw InconsistentFlow("cannot isolate a field in the p^" + std::to_string(e) + " coefficient " + c.str());
    }
    return result;
}

/// Density of H_k = Tr L^{k/n}, i.e. the residue of L^{k/n}.
inline DiffPoly conserved_charge(const LaxOperator& L, int k, std::optional<int> depth = std::nullopt,
                                 ProductKind kind = ProductKind::Moyal) {
    if (k % L.order == 0 && L.symbol.is_exact())
        throw InvalidRequest("charge index " + std::to_string(k) + " is a multiple of the Lax order");
    const int d = depth.value_or(k + L.order);
    if (d < k)
        throw FloorTooDeep("charge H_" + std::to_string(k) + " needs root depth at least " + std::to_string(k));
    return residue(frac_power(L, k, d, kind));
}

/// d h / d t along the flow is a total x-derivative.
inline bool is_conserved(const DiffPoly& density, const FlowResult& flow) {
    return equals_mod_total_derivative(time_derivative(density, flow.rhs), DiffPoly());
}

inline FlowResult dispersionless_limit(const FlowResult& f) {
    FlowResult out = f;
    for (auto& [field, rhs] : out.rhs)
        rhs = substitute_kappa(rhs, Rational(0));
    return out;
}

inline PhaseSymbol dispersionless_limit(const PhaseSymbol& s) { return substitute_kappa(s, Rational(0)); }

inline FlowResult substitute_kappa(const FlowResult& f, const Rational& value) {
    FlowResult out = f;
    for (auto& [field, rhs] : out.rhs)
        rhs = substitute_kappa(rhs, value);
    return out;
}

/// u_n = sum_{j=0}^{n} 2^{-j} C(n,j) d^j v_{n-j}; v[i] is v_i. Produces u_0 .. u_{count-1}.
inline std::vector<DiffPoly> sato_to_moyal(const std::vector<DiffPoly>& v, std::optional<std::size_t> count = std::nullopt) {
    const std::size_t want = count.value_or(v.size());
    if (want > v.size())
        throw InsufficientCoefficients("u_" + std::to_string(want - 1) + " needs v_0 .. v_" + std::to_string(want - 1) +
                                       " but only " + std::to_string(v.size()) + " were given");
    std::vector<DiffPoly> u;
    for (std::size_t n = 0; n < want; ++n) {
        DiffPoly acc;
        for (std::size_t j = 0; j <= n; ++j) {
            Rational c = binomial(static_cast<long>(n), static_cast<int>(j)) * Rational(1, 1L << j);
            acc += total_x_derivative(v[n - j], static_cast<unsigned>(j)) * KappaScalar(c);
        }
        u.push_back(std::move(acc));
    }
    return u;
}

/// Outcome of comparing the Moyal KP flow at kappa = 1/2 with the Sato flow at kappa = 1
/// transported through the coefficient map.
struct IntertwiningReport {
    int k = 0;
    int tail_depth = 0;
    /// Per Moyal coefficient u_n: moyal rhs after u := S(v), and S applied to the Sato rhs.
    std::map<std::uint32_t, std::pair<DiffPoly, DiffPoly>> sides;
    bool agrees = true;
};

inline IntertwiningReport sato_moyal_intertwining(int k, int tail_depth) {
    const LaxOperator lambda = LaxOperator::kp(tail_depth);
    FlowOptions moyal_opt, psdo_opt;
    psdo_opt.kind = ProductKind::PsdoLeft;
    FlowResult moyal = substitute_kappa(lax_flow(lambda, k, moyal_opt), Rational(1, 2));
    FlowResult sato = substitute_kappa(lax_flow(lambda, k, psdo_opt), Rational(1));

    std::uint32_t top = 0;
    for (const auto* f : {&moyal, &sato})
        for (const auto& [field, rhs] : f->rhs) {
            top = std::max(top, field);
            for (std::uint32_t g : rhs.fields())
                top = std::max(top, g);
        }
    std::vector<DiffPoly> v;
    for (std::uint32_t i = 0; i <= top; ++i)
        v.push_back(DiffPoly::field(i));
    std::vector<DiffPoly> s = sato_to_moyal(v);
    std::map<std::uint32_t, DiffPoly> subst;
    for (std::uint32_t i = 0; i <= top; ++i)
        subst[i] = s[i];

    std::vector<DiffPoly> vdot;
    for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(tail_depth); ++i)
        vdot.push_back(sato.rhs.at(i));
    std::vector<DiffPoly> transported = sato_to_moyal(vdot);

    IntertwiningReport report{k, tail_depth, {}, true};
    for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(tail_depth); ++n) {
        DiffPoly lhs = substitute_fields(moyal.rhs.at(n), subst);
        report.agrees = report.agrees && lhs == transported[n];
        report.sides[n] = {lhs, transported[n]};
    }
    return report;
}

} // namespace moyal
