#include "wldp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wldp/parallel.hpp"

namespace wldp::rate {

namespace {

// J(x, theta) with the x-dependent log-potential hoisted out, so a theta
// scan at fixed x pays for one quadrature only.
struct JAtX {
    double x;
    double seam;          // G_sigma(x)/2
    double log_potential; // int log(x - y) dsigma(y)

    explicit JAtX(double x_)
        : x(x_), seam(0.5 * freeprob::g_sigma(x_)),
          log_potential(freeprob::log_potential(x_)) {}

    double operator()(double theta) const {
        if (theta <= seam) return theta * theta;
        return theta * x - 0.5 - 0.5 * std::log(2.0 * theta) - 0.5 * log_potential;
    }
};

} // namespace

RatePoint rate_point(const annealed::AnnealedF& f, double x, const num::Tolerances& tol) {
    RatePoint out;
    out.x = x;
    if (x < freeprob::kEdge) {
        out.value = std::nullopt;
        out.theta_star = 0.0;
        out.validity = true;
        return out;
    }
    const JAtX j(x);
    auto objective = [&](double theta) { return j(theta) - f.value(theta).value; };
    // 96 coarse cells resolve this objective (smooth, one kink at theta_0);
    // golden refinement supplies the precision.
    auto r = num::maximize_1d(objective, 0.0, x, tol, 96);
    out.value = r.max;
    out.theta_star = r.argmax;
    out.validity = f.value(r.argmax).validity &&
                   f.value(std::max(0.0, r.argmax * (1.0 - 1e-3))).validity &&
                   f.value(std::min(x, r.argmax * (1.0 + 1e-3))).validity;
    return out;
}

RateCurve rate_curve(const annealed::AnnealedF& f, const std::vector<double>& x_grid,
                     const num::Tolerances& tol) {
    RateCurve curve;
    curve.law_name = f.law().name();
    curve.tails = f.tails();
    curve.regime = f.classification().tag;
    curve.points.resize(x_grid.size());
    curve.goe_reference.resize(x_grid.size());
    parallel_for(x_grid.size(), [&](std::size_t i) {
        curve.points[i] = rate_point(f, x_grid[i], tol);
        curve.goe_reference[i] = freeprob::i_goe(x_grid[i]);
    });
    return curve;
}

std::optional<std::pair<double, double>> goe_window(const laws::TailConstants& tails) {
    if (!(tails.A > 1.0 && tails.A < 2.0)) return std::nullopt;
    const double s = std::sqrt(tails.A - 1.0);
    return std::make_pair(2.0, s + 1.0 / s);
}

ThetaStarReport theta_star_uniqueness_report(const annealed::AnnealedF& f, double x,
                                             const num::Tolerances& tol) {
    if (x < freeprob::kEdge) throw OutOfDomain("theta_star_uniqueness_report: requires x >= 2");
    const JAtX j(x);
    auto objective = [&](double theta) { return j(theta) - f.value(theta).value; };

    const int n = 512;
    std::vector<double> vals(n + 1);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        vals[i] = objective(x * i / n);
        best = std::max(best, vals[i]);
    }
    // Golden refinement can only raise the max; near-maximizer membership
    // stays grid-based so the spread is well defined.
    auto refined = num::maximize_1d(objective, 0.0, x, tol);
    best = std::max(best, refined.max);

    ThetaStarReport rep;
    double lo = x;
    double hi = 0.0;
    for (int i = 0; i <= n; ++i) {
        if (vals[i] >= best - 1e-6) {
            ++rep.cluster_count;
            lo = std::min(lo, x * i / n);
            hi = std::max(hi, x * i / n);
        }
    }
    rep.spread = rep.cluster_count > 0 ? hi - lo : 0.0;
    rep.clean = rep.spread <= 1e-3;
    return rep;
}

} // namespace wldp::rate
