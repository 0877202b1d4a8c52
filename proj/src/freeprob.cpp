#include "wldp/freeprob.hpp"

#include <cmath>
#include <mutex>

namespace wldp::freeprob {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

double lp_quadrature(double x) {
    // Substituting y = 2 - t^2 (right half) and y = -2 + s^2 (left half)
    // removes both square-root edges and the integrable log singularity at
    // y = x = 2; both integrands are smooth on [0, sqrt(2)].
    num::Tolerances tol;
    auto right = [x](double t) {
        const double t2 = t * t;
        const double u = x - 2.0 + t2;
        if (u <= 0.0) return 0.0; // t^2 log t^2 -> 0 at the edge itself
        return 2.0 * t * t * std::sqrt(4.0 - t2) * std::log(u) / (2.0 * kPi);
    };
    auto left = [x](double s) {
        const double s2 = s * s;
        return 2.0 * s * s * std::sqrt(4.0 - s2) * std::log(x + 2.0 - s2) / (2.0 * kPi);
    };
    return num::integrate(right, 0.0, kSqrt2, tol) + num::integrate(left, 0.0, kSqrt2, tol);
}

} // namespace

double semicircle_density(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) + std::asin(0.5 * x) / kPi;
}

double g_sigma(double x) {
    if (x < kEdge) throw OutOfDomain("g_sigma: requires x >= 2");
    return 0.5 * (x - std::sqrt(x * x - 4.0));
}

double k_sigma(double z) {
    if (z <= 0.0) throw OutOfDomain("k_sigma: requires z > 0");
    return z + 1.0 / z;
}

double log_potential_at_edge() {
    static std::once_flag flag;
    static double cached = 0.0;
    std::call_once(flag, [] { cached = lp_quadrature(kEdge); });
    return cached;
}

double log_potential(double x) {
    if (x < kEdge) throw OutOfDomain("log_potential: requires x >= 2");
    if (x == kEdge) return log_potential_at_edge();
    return lp_quadrature(x);
}

double j_sph(double x, double theta) {
    if (x < kEdge) throw OutOfDomain("j_sph: requires x >= 2");
    if (theta < 0.0) throw OutOfDomain("j_sph: requires theta >= 0");
    if (theta <= 0.5 * g_sigma(x)) return theta * theta;
    return theta * x - 0.5 - 0.5 * std::log(2.0 * theta) - 0.5 * log_potential(x);
}

std::optional<double> i_goe(double x) {
    if (x < kEdge) return std::nullopt;
    const double r = std::sqrt(x * x - 4.0);
    return x * r / 4.0 - std::log(0.5 * (x + r));
}

double i_goe_variational(double x, const num::Tolerances& tol) {
    if (x < kEdge) throw OutOfDomain("i_goe_variational: requires x >= 2");
    const double lp = log_potential(x);
    const double seam = 0.5 * g_sigma(x);
    auto objective = [&](double theta) {
        if (theta <= seam) return 0.0; // theta^2 - theta^2
        return theta * x - 0.5 - 0.5 * std::log(2.0 * theta) - 0.5 * lp - theta * theta;
    };
    auto r = num::maximize_1d(objective, 0.0, x, tol);
    return r.max;
}

} // namespace wldp::freeprob
