#include <chrono>
#include <cstdio>
#include "wldp/annealed.hpp"
using namespace wldp;
using Clock = std::chrono::steady_clock;
static double ms(Clock::time_point a, Clock::time_point b){ return std::chrono::duration<double,std::milli>(b-a).count(); }
int main(){
    auto law = laws::sparse_gaussian(0.5);
    auto gs = annealed::GibbsSolver::for_law(law);
    for (double dz : {1.0, 0.1, 1e-2, 1e-4, 1e-6, 1e-8}) {
        auto t0 = Clock::now();
        double g = gs->big_g_prime(1.0 + dz);
        auto t1 = Clock::now();
        std::printf("G'(B/2+%g) = %.6g   %.2f ms\n", dz, g, ms(t0,t1));
        std::fflush(stdout);
    }
    auto t0 = Clock::now(); auto l = gs->limit_l(); auto t1 = Clock::now();
    std::printf("limit_l: %s  %.1f ms\n", l ? "finite" : "inf", ms(t0,t1)); std::fflush(stdout);
    t0 = Clock::now(); double z = gs->zeta_of_c(1.0); t1 = Clock::now();
    std::printf("zeta_of_c(1) = %.8f  %.1f ms\n", z, ms(t0,t1)); std::fflush(stdout);
    t0 = Clock::now(); double r = gs->r_of_c(0.8); t1 = Clock::now();
    std::printf("r_of_c(0.8) = %.8f  %.1f ms\n", r, ms(t0,t1)); std::fflush(stdout);
    t0 = Clock::now(); double k = gs->k_theta(3.0, 0.3); t1 = Clock::now();
    std::printf("k_theta(3,0.3) = %.8f  %.1f ms\n", k, ms(t0,t1)); std::fflush(stdout);
    return 0;
}
