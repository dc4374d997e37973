// Walks through the KdV hierarchy: square root, first flows, a charge,
// and the dispersionless limit of the t3 flow.
#include "moyal/moyal.hpp"

#include <iostream>

int main() {
    using namespace moyal;
    const LaxOperator L = LaxOperator::kdv();

    std::cout << "L = " << L.symbol.str() << "\n";
    std::cout << "L^(1/2) = " << nth_root(L, 5).str() << "\n\n";

    for (int k : {1, 3, 5}) {
        FlowResult f = lax_flow(L, k);
        std::cout << "u_t" << k << " = " << f.rhs.at(0).str() << "\n";
    }

    DiffPoly h3 = conserved_charge(L, 3);
    std::cout << "\nH_3 = " << h3.str() << "\n";
    std::cout << "conserved along t5: " << (is_conserved(h3, lax_flow(L, 5)) ? "yes" : "no") << "\n";

    std::cout << "limit of t3: " << dispersionless_limit(lax_flow(L, 3)).rhs.at(0).str() << "\n";
}
