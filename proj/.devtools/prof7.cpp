#include <cstdio>
#include "wldp/annealed.hpp"
#include "wldp/rate.hpp"
using namespace wldp;
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    annealed::AnnealedF f(laws::three_point(0.2));
    for (double x : {2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0}) {
        try {
            auto p = rate::rate_point(f, x);
            std::printf("x=%g I=%.8f theta*=%.6f valid=%d\n", x, *p.value, p.theta_star, (int)p.validity);
        } catch (const std::exception& e) {
            std::printf("x=%g ERROR %s\n", x, e.what());
        }
    }
    return 0;
}
