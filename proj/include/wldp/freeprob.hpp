#pragma once
#include <optional>

#include "wldp/numerics.hpp"

namespace wldp::freeprob {

inline constexpr double kEdge = 2.0;

// Semicircle density and CDF on [-2, 2].
double semicircle_density(double x);
double semicircle_cdf(double x);

// Stieltjes transform G_sigma(x) = (x - sqrt(x^2-4))/2 for x >= 2.
double g_sigma(double x);

// K_sigma(z) = z + 1/z, the inverse of G_sigma on (0, 1].
double k_sigma(double z);

// Log-potential of the semicircle law, int log(x - y) dsigma(y), x >= 2.
// Adaptive quadrature with a t^2 edge substitution on both endpoints; the
// value at the edge is computed once and cached.
double log_potential(double x);
double log_potential_at_edge();

// Limit spherical integral J(x, theta): theta^2 below theta = G_sigma(x)/2,
// otherwise theta x - 1/2 - log(2 theta)/2 - log_potential(x)/2.
double j_sph(double x, double theta);

// GOE rate function; nullopt encodes the +infinity value below the edge.
std::optional<double> i_goe(double x);

// Internal consistency oracle: sup over theta in [0, x] of J(x,.) - theta^2.
double i_goe_variational(double x, const num::Tolerances& tol = {});

} // namespace wldp::freeprob
