#include "wldp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wldp::num {

namespace {

constexpr int kMaxDepth = 60;
constexpr double kTailDrop = 45.0; // exceeds -log(1e-18)

struct PanelState {
    const ScalarFn* f;
    bool converged = true;
};

double simpson(double h, double fa, double fm, double fb) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(PanelState& st, double a, double b, double fa, double fm, double fb, double whole,
             double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = simpson(m - a, fa, flm, fm);
    const double right = simpson(b - m, fm, frm, fb);
    const double delta = left + right - whole;
    // Rounding floor: once delta sits at the evaluation noise of the panel
    // values, further splitting only chases noise. The first few levels are
    // always split so a narrow feature cannot slip between dyadic probes.
    const double noise =
        64.0 * 2.2e-16 * (b - a) * (std::abs(fa) + 4.0 * std::abs(flm) + 2.0 * std::abs(fm) +
                                    4.0 * std::abs(frm) + std::abs(fb)) / 12.0;
    const bool may_accept = depth <= kMaxDepth - 4;
    if ((may_accept && (std::abs(delta) <= 15.0 * eps || std::abs(delta) <= noise)) ||
        depth <= 0) {
        if (depth <= 0 && std::abs(delta) > 15.0 * eps && std::abs(delta) > noise) {
            st.converged = false;
        }
        return left + right + delta / 15.0;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

} // namespace

double integrate(const ScalarFn& f, double a, double b, const Tolerances& tol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, tol);

    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson(b - a, fa, fm, fb);

    // Scale for the relative tolerance from a coarse |f| estimate, so that
    // cancelling integrands do not trigger bottomless refinement.
    double scale = 0.0;
    for (int i = 0; i <= 8; ++i) {
        scale += std::abs(f(a + (b - a) * i / 8.0));
    }
    scale = std::max(scale * (b - a) / 9.0, std::abs(whole));
    const double eps = tol.quad_rel * std::max(scale, std::numeric_limits<double>::min());

    PanelState st{&f};
    const double value = adapt(st, a, b, fa, fm, fb, whole, eps, kMaxDepth);
    if (!st.converged) throw NonConvergent("integrate: refinement depth exhausted");
    return value;
}

double truncation_radius(const DecayCertificate& cert) {
    if (!(cert.quadratic > 0.0)) {
        throw DivergentIntegrand("integrate_line: certificate lacks quadratic decay");
    }
    // Envelope peak sits at x = linear / (2 quadratic); choose R with
    // envelope(R) <= envelope peak - kTailDrop.
    const double c = cert.quadratic;
    const double bl = std::max(cert.linear, 0.0);
    const double peak = bl * bl / (4.0 * c);
    const double disc = bl * bl + 4.0 * c * (peak + kTailDrop);
    return (bl + std::sqrt(disc)) / (2.0 * c);
}

double integrate_line(const ScalarFn& f, const DecayCertificate& cert, const Tolerances& tol) {
    const double radius = truncation_radius(cert);
    if (cert.even) return 2.0 * integrate(f, 0.0, radius, tol);
    return integrate(f, -radius, radius, tol);
}

double find_root(const ScalarFn& f, double a, double b, const Tolerances& tol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw InvalidBracket("find_root: no sign change on bracket");

    // Brent: inverse-quadratic/secant steps guarded by bisection.
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int it = 0; it < 400; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * tol.root_abs;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

MaxResult maximize_1d(const ScalarFn& f, double a, double b, const Tolerances& tol,
                      int grid_points) {
    if (grid_points < 2) grid_points = 2;
    if (b < a) std::swap(a, b);

    MaxResult best{a, f(a)};
    int best_idx = 0;
    const int n = grid_points - 1;
    for (int i = 1; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double v = f(x);
        if (v > best.max) {
            best = {x, v};
            best_idx = i;
        }
    }

    // Golden-section on the two cells flanking the best grid point.
    double lo = a + (b - a) * std::max(best_idx - 1, 0) / n;
    double hi = a + (b - a) * std::min(best_idx + 1, n) / n;
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > tol.opt_abs) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
        if (f1 > best.max) best = {x1, f1};
        if (f2 > best.max) best = {x2, f2};
    }
    return best;
}

double derivative(const ScalarFn& f, double x, int order, const Tolerances& tol) {
    const double h = tol.fd_step * std::max(1.0, std::abs(x));
    if (order == 1) {
        auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
        const double d1 = central(h);
        const double d2 = central(0.5 * h);
        return (4.0 * d2 - d1) / 3.0;
    }
    if (order == 2) {
        auto central = [&](double step) {
            return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
        };
        const double d1 = central(h);
        const double d2 = central(0.5 * h);
        return (4.0 * d2 - d1) / 3.0;
    }
    throw InvalidParameters("derivative: order must be 1 or 2");
}

} // namespace wldp::num
