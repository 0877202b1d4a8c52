#include <cstdio>
#include "wldp/annealed.hpp"
using namespace wldp;
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    auto law = laws::sparse_gaussian(0.5);
    auto gs = annealed::GibbsSolver::for_law(law);
    double theta = 0.6;
    for (double u : {1e-2, 1e-4, 1e-6}) {
        double alpha = 1.0 - u;
        double C = 4*theta*theta*alpha*u;
        double z = gs->zeta_of_c(C);
        double g = gs->big_g(z);
        double gp = gs->big_g_prime(z);
        std::printf("u=%g C=%g zeta_C=%g (1/2C=%g)  G=%g  G'=%g (+C=%.3g)  R=%g  K=%g\n",
                    u, C, z, 0.5/C, g, gp, gp+C, gs->r_of_c(C), gs->k_theta(theta, alpha));
    }
    for (double a : {0.3, 0.6, 0.9, 0.99}) std::printf("K(0.6,%g)=%g\n", a, gs->k_theta(theta,a));
    return 0;
}
