#include <cstdio>
#include <cmath>
#include "wldp/annealed.hpp"
#include "wldp/numerics.hpp"
using namespace wldp;
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    annealed::AnnealedF f(laws::three_point(0.2));
    const double A = f.tails().A;
    int bad = 0;
    for (int i = 0; i <= 3000; ++i) {
        double th = 2.54 + (10.0-2.54)*i/3000.0;
        try { f.f_compact(th); }
        catch (const std::exception& e) {
            double u = th*th*(A-1.0);
            auto V = [&](double a){ return u*a*a + th*th + 0.5*std::log(1.0-a); };
            auto g = num::maximize_1d(V, 1e-9, 1.0-1e-12, {});
            double ap = 0.5*(1.0+std::sqrt(std::max(0.0,1.0-1.0/u)));
            std::printf("FAIL theta=%.8f u=%.10f explicit=%.12f@%.8f grid=%.12f@%.8f t2=%.12f\n",
                        th, u, V(ap), ap, g.max, g.argmax, th*th);
            if (++bad > 4) break;
        }
    }
    std::printf("done bad=%d\n", bad);
    return 0;
}
