#include <chrono>
#include <cstdio>
#include "wldp/annealed.hpp"
#include "wldp/rate.hpp"
using namespace wldp;
using Clock = std::chrono::steady_clock;
static double ms(Clock::time_point a, Clock::time_point b){ return std::chrono::duration<double,std::milli>(b-a).count(); }
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    annealed::AnnealedF f(laws::sparse_gaussian(0.5));
    // warm
    f.value(1.7);
    for (double th : {0.9, 1.3, 2.1, 3.7, 5.2}) {
        auto t0 = Clock::now();
        auto p = f.value(th);
        auto t1 = Clock::now();
        std::printf("F(%.2f) = %.8f [%s]  %.2f ms\n", th, p.value, annealed::f_regime_name(p.regime), ms(t0,t1));
    }
    // many distinct thetas, timing aggregate
    auto t0 = Clock::now();
    int n = 100;
    for (int i = 0; i < n; ++i) f.value(0.9 + 3.0*i/(n-1));
    auto t1 = Clock::now();
    std::printf("100 structured F evals: %.1f ms total, %.2f ms each\n", ms(t0,t1), ms(t0,t1)/n);
    auto t2 = Clock::now();
    auto rp = rate::rate_point(f, 4.0);
    auto t3 = Clock::now();
    std::printf("rate_point(4): I=%.6f theta*=%.4f  %.0f ms\n", *rp.value, rp.theta_star, ms(t2,t3));
    return 0;
}
