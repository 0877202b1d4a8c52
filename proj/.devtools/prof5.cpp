#include <cstdio>
#include <cmath>
#include "wldp/annealed.hpp"
#include "wldp/numerics.hpp"
using namespace wldp;
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    annealed::AnnealedF f(laws::three_point(0.2));
    const double A = f.tails().A;
    std::printf("A=%.8f B=%.3f thr_small=%.4f\n", A, f.tails().B, f.small_theta_threshold());
    try { std::printf("compact threshold=%.6f\n", f.compact_validity_threshold()); }
    catch (const std::exception& e) { std::printf("threshold error: %s\n", e.what()); }
    for (double th : {2.6, 3.0, 4.0, 8.0, 21.0}) {
        const double u = th*th*(A-1.0);
        auto V = [&](double a){ return u*a*a + th*th + 0.5*std::log(1.0-a); };
        auto g = num::maximize_1d(V, 1e-9, 1.0-1e-12, {});
        double ap = 0.5*(1.0+std::sqrt(std::max(0.0,1.0-1.0/u)));
        double ex = u < 1 ? -1e300 : V(ap);
        std::printf("theta=%g u=%.4f  explicit=%.12f@%.8f  grid=%.12f@%.8f  diff=%.3g\n",
                    th, u, ex, ap, g.max, g.argmax, std::abs(std::max(th*th,ex)-std::max(th*th,g.max)));
        try { auto p = f.f_compact(th); std::printf("   f_compact: %.10f [%s] valid=%d\n", p.value, annealed::f_regime_name(p.regime), (int)p.validity); }
        catch (const std::exception& e) { std::printf("   f_compact error: %s\n", e.what()); }
    }
    return 0;
}
