#include <chrono>
#include <cstdio>
#include "wldp/annealed.hpp"
namespace wldp::annealed { long debug_integral_evals(); long debug_ktheta_evals(); }
using namespace wldp;
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    annealed::AnnealedF f(laws::sparse_gaussian(0.5));
    f.value(1.7); f.value(1.9); // warm
    long i0 = annealed::debug_integral_evals(), k0 = annealed::debug_ktheta_evals();
    int n = 50;
    for (int i = 0; i < n; ++i) f.value(1.9 + 2.0*i/(n-1));
    long i1 = annealed::debug_integral_evals(), k1 = annealed::debug_ktheta_evals();
    std::printf("per F: %.1f k_theta evals, %.1f gibbs-pair integrals (%.1f per K)\n",
        double(k1-k0)/n, double(i1-i0)/n, double(i1-i0)/double(k1-k0));
    return 0;
}
