#pragma once
#include <optional>
#include <string>
#include <vector>

#include "wldp/annealed.hpp"
#include "wldp/freeprob.hpp"

namespace wldp::rate {

struct RatePoint {
    double x = 0.0;
    std::optional<double> value; // nullopt encodes +infinity (x < 2)
    double theta_star = 0.0;
    bool validity = true;
};

struct ThetaStarReport {
    int cluster_count = 0;  // grid near-maximizers within 1e-6 of the max
    double spread = 0.0;    // theta spread across that cluster
    bool clean = true;      // spread <= 1e-3
};

struct RateCurve {
    std::string law_name;
    laws::TailConstants tails;
    laws::RegimeTag regime = laws::RegimeTag::Unclassified;
    std::vector<RatePoint> points;
    std::vector<std::optional<double>> goe_reference;
};

// I(x) = sup over theta in [0, x] of J(x, theta) - F(theta). The bracket is
// safe: J <= theta x and F >= theta^2 push the objective negative past x.
RatePoint rate_point(const annealed::AnnealedF& f, double x,
                     const num::Tolerances& tol = {});

RateCurve rate_curve(const annealed::AnnealedF& f, const std::vector<double>& x_grid,
                     const num::Tolerances& tol = {});

// Near-bulk window where the curve provably equals I_GOE; present only for
// 1 < A < 2.
std::optional<std::pair<double, double>> goe_window(const laws::TailConstants& tails);

ThetaStarReport theta_star_uniqueness_report(const annealed::AnnealedF& f, double x,
                                             const num::Tolerances& tol = {});

} // namespace wldp::rate
