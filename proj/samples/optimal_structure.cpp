// Dominant structure of a few patterns on both sides of tau = 2.5.
#include <cstdio>

#include "girgmotif/milp.hpp"

using namespace girgmotif;

int main() {
    for (const auto& [label, h] : {std::pair{"5-cycle", make_cycle(5)}, std::pair{"diamond", make_diamond()},
                                   std::pair{"4-star", make_star(4)}})
        for (double tau : {2.2, 2.7}) {
            auto rep = solve_instance({h, tau, 2.0, 1, Variant::General});
            std::printf("%-8s tau=%.1f  f*=%.4f  %-19s alpha classes:", label, tau, rep.f_star, to_string(rep.unique));
            for (double a : rep.optimizer.alpha) std::printf(" %s", to_string(classify_alpha_value(a, tau)));
            std::printf("\n");
        }
}
