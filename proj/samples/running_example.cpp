// Face numbers of the chain and order polytopes of P_(5,2,1,4,2,3), from normal forms.
#include <iostream>

#include "chainorder/chainorder.hpp"

int main() {
    using namespace chainorder;
    const Tau tau{{5, 2, 1, 4, 2, 3}};
    for (int k : {tau.length(), 0}) {
        auto f = f_vector_normal_form(tau, k);
        std::cout << csv_row(tau.to_string(), std::to_string(k), polytope_name(tau, k), f) << '\n';
    }
}
