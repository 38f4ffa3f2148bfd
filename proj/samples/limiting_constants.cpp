// Monte Carlo constants of the triangle in both phases, next to a simulated count.
#include <cstdio>

#include "girgmotif/theory.hpp"

using namespace girgmotif;

int main() {
    McOptions o;
    o.samples = 1 << 19;
    auto geo = mc_geo_constant(make_clique(3), 2.8, 2.0, 1, Variant::General, o);
    std::printf("tau=2.8  %s  J = %.2f +- %.2f (radius %.3g)\n", to_string(geo.regime), geo.value, geo.std_error,
                geo.truncation);
    auto non = mc_nongeo_constant(make_clique(3), 2.2, 2.0, 1, Variant::General, o);
    std::printf("tau=2.2  %s  I = %.2f +- %.2f\n", to_string(non.regime), non.value, non.std_error);

    GirgParams p;
    p.tau = 2.8;
    for (const auto& row : empirical_constant(make_clique(3), p, Variant::General, 1.0, {2000, 8000}, 3))
        std::printf("tau=2.8  n=%zu  N/n = %.2f (cv %.2f)\n", row.n, row.mean, row.cv);
}
