#include <chrono>
#include <cstdio>
#include "wldp/annealed.hpp"
namespace wldp::annealed { long debug_integral_evals(); long debug_ktheta_evals(); }
using namespace wldp;
using Clock = std::chrono::steady_clock;
static double ms(Clock::time_point a, Clock::time_point b){ return std::chrono::duration<double,std::milli>(b-a).count(); }
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    annealed::AnnealedF f(laws::gauss_rademacher_mix(0.6, 0.5, 1.5));
    std::printf("A=%g B=%g cls=%s thr=%g\n", f.tails().A, f.tails().B,
        laws::regime_tag_name(f.classification().tag), f.small_theta_threshold());
    for (double th : {0.75, 0.9, 1.1, 1.3, 1.5, 2.0}) {
        long k0 = annealed::debug_ktheta_evals(), i0 = annealed::debug_integral_evals();
        auto t0 = Clock::now();
        auto p = f.value(th);
        auto t1 = Clock::now();
        std::printf("F(%.2f)=%.8f [%s] %.1f ms  (%ld K, %ld integrals)\n", th, p.value,
            annealed::f_regime_name(p.regime), ms(t0,t1),
            annealed::debug_ktheta_evals()-k0, annealed::debug_integral_evals()-i0);
    }
    return 0;
}
