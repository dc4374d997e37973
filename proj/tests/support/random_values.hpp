#pragma once

// Seeded generators of small random engine values for property tests.

#include "moyal/moyal.hpp"

#include <random>

namespace moyal::testing {

class Random {
public:
    explicit Random(std::uint32_t seed) : gen_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational(int bound = 5) {
        int num = integer(-bound, bound);
        return Rational(num, integer(1, 4));
    }
    Rational nonzero_rational(int bound = 5) {
        Rational r;
        while (r.is_zero())
            r = rational(bound);
        return r;
    }

    KappaScalar kappa_scalar() {
        KappaScalar s;
        for (int e = 0; e <= 2; ++e)
            if (coin())
                s += KappaScalar::monomial(e, rational());
        return s;
    }

    DiffMonomial monomial(int fields, int max_order, int max_degree) {
        DiffMonomial m;
        const int degree = integer(0, max_degree);
        for (int i = 0; i < degree; ++i)
            m = m * DiffMonomial(JetVariable{static_cast<std::uint32_t>(integer(0, fields - 1)),
                                             static_cast<std::uint32_t>(integer(0, max_order))});
        return m;
    }

    DiffPoly diffpoly(int fields = 2, int max_order = 2, int max_degree = 2, int max_terms = 3) {
        DiffPoly out;
        const int terms = integer(0, max_terms);
        for (int i = 0; i < terms; ++i)
            out.add_term(monomial(fields, max_order, max_degree), kappa_scalar());
        return out;
    }

    /// Polynomial in p with exponents in [0, max_p].
    PhaseSymbol polynomial_symbol(int max_p = 2, int fields = 2) {
        PhaseSymbol s;
        for (int e = 0; e <= max_p; ++e)
            if (coin())
                s.add_term(e, diffpoly(fields, 2, 2, 2));
        return s;
    }

    /// Laurent symbol with exponents in [floor, top], truncated at `floor`.
    PhaseSymbol laurent_symbol(int top, int floor, int fields = 2) {
        PhaseSymbol s = PhaseSymbol().truncated(floor);
        for (int e = floor; e <= top; ++e)
            if (coin())
                s.add_term(e, diffpoly(fields, 1, 2, 2));
        return s;
    }

    QScalar qscalar() {
        QScalar s;
        for (int e = -1; e <= 2; ++e)
            if (coin())
                s += QScalar::q_power(e) * QScalar(rational(3));
        return s;
    }

    QLaurent qlaurent(int lo = 0, int hi = 2) {
        QLaurent f;
        for (int m = lo; m <= hi; ++m)
            if (coin())
                f.add_term(m, qscalar());
        return f;
    }

    /// A product of coefficient, shift and q-derivative letters of dq-degree <= max_dq.
    QOperator qword(int max_dq = 3) {
        QWord w;
        int budget = integer(0, max_dq);
        const int letters = integer(1, 4);
        for (int i = 0; i < letters; ++i) {
            switch (integer(0, 2)) {
            case 0: w.push_back(QLetter::coefficient(qlaurent())); break;
            case 1: w.push_back(QLetter::shift(integer(-1, 2))); break;
            default:
                if (budget > 0) {
                    int b = integer(1, budget);
                    budget -= b;
                    w.push_back(QLetter::deriv(b));
                }
            }
        }
        return QOperator::word(w);
    }

    QOperator qoperator(int max_dq = 3) {
        QOperator A = qword(max_dq);
        if (coin())
            A = A + qword(max_dq);
        return A;
    }

    std::mt19937& engine() { return gen_; }

private:
    std::mt19937 gen_;
};

} // namespace moyal::testing
