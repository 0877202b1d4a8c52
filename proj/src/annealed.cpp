#include "wldp/annealed.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <limits>

namespace wldp::annealed {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kBoundaryEps = 0x1p-40; // zeta offset standing in for B/2 itself
constexpr double kFloorSlack = 1e-7;     // predicate slack for theta_zero

double guarded_sqrt(double v) {
    return std::sqrt(std::max(v, 0.0));
}

// One adaptive Simpson pass for the pair (exp(phi), x^2 exp(phi)); the
// partition function and the second moment share every exp() call.
struct PairVal {
    double z = 0.0;
    double m2 = 0.0;
};

template <typename Phi>
struct PairQuad {
    const Phi& phi;
    double shift = 0.0;
    bool converged = true;

    PairQuad(const Phi& p, double s) : phi(p), shift(s) {}

    PairVal eval(double x) const {
        const double e = std::exp(phi(x) - shift);
        return {e, x * x * e};
    }
    static PairVal rule(double h, const PairVal& fa, const PairVal& fm, const PairVal& fb) {
        return {h / 6.0 * (fa.z + 4.0 * fm.z + fb.z), h / 6.0 * (fa.m2 + 4.0 * fm.m2 + fb.m2)};
    }
    PairVal adapt(double a, double b, const PairVal& fa, const PairVal& fm, const PairVal& fb,
                  const PairVal& whole, double ez, double em, int depth) {
        const double m = 0.5 * (a + b);
        const PairVal flm = eval(0.5 * (a + m));
        const PairVal frm = eval(0.5 * (m + b));
        const PairVal left = rule(m - a, fa, flm, fm);
        const PairVal right = rule(b - m, fm, frm, fb);
        const double dz = left.z + right.z - whole.z;
        const double dm = left.m2 + right.m2 - whole.m2;
        const double noise_z = 64.0 * 2.2e-16 * (b - a) *
                               (fa.z + 4.0 * flm.z + 2.0 * fm.z + 4.0 * frm.z + fb.z) / 12.0;
        const double noise_m = 64.0 * 2.2e-16 * (b - a) *
                               (fa.m2 + 4.0 * flm.m2 + 2.0 * fm.m2 + 4.0 * frm.m2 + fb.m2) / 12.0;
        const bool z_ok = std::abs(dz) <= 15.0 * ez || std::abs(dz) <= noise_z;
        const bool m_ok = std::abs(dm) <= 15.0 * em || std::abs(dm) <= noise_m;
        const bool may_accept = depth <= 57; // always split the first levels
        if ((may_accept && z_ok && m_ok) || depth <= 0) {
            if (depth <= 0 && !(z_ok && m_ok)) converged = false;
            return {left.z + right.z + dz / 15.0, left.m2 + right.m2 + dm / 15.0};
        }
        const PairVal l = adapt(a, m, fa, flm, fm, left, 0.5 * ez, 0.5 * em, depth - 1);
        const PairVal r = adapt(m, b, fm, frm, fb, right, 0.5 * ez, 0.5 * em, depth - 1);
        return {l.z + r.z, l.m2 + r.m2};
    }
    PairVal integrate(double a, double b, double rel) {
        const PairVal fa = eval(a);
        const PairVal fb = eval(b);
        const PairVal fm = eval(0.5 * (a + b));
        const PairVal whole = rule(b - a, fa, fm, fb);
        double sz = 0.0;
        double sm = 0.0;
        for (int i = 0; i <= 8; ++i) {
            const PairVal v = eval(a + (b - a) * i / 8.0);
            sz += v.z;
            sm += v.m2;
        }
        const double min_ = std::numeric_limits<double>::min();
        const double ez = rel * std::max({sz * (b - a) / 9.0, whole.z, min_});
        const double em = rel * std::max({sm * (b - a) / 9.0, whole.m2, min_});
        return adapt(a, b, fa, fm, fb, whole, ez, em, 60);
    }
};

} // namespace

const char* f_regime_name(FRegime r) {
    switch (r) {
        case FRegime::SmallTheta: return "SmallTheta";
        case FRegime::IncreasingPsiStructured: return "IncreasingPsiStructured";
        case FRegime::IncreasingPsiGrid: return "IncreasingPsiGrid";
        case FRegime::CompactExplicit: return "CompactExplicit";
        case FRegime::CompactGrid: return "CompactGrid";
        case FRegime::UpperBoundOnly: return "UpperBoundOnly";
    }
    return "SmallTheta";
}

GibbsSolver::GibbsSolver(ShiftedLogLaplace phi, double b, double tail_linear,
                         num::Tolerances tol, bool structured_tail)
    : phi_(std::move(phi)), b_(b), tail_linear_(tail_linear), tol_(tol),
      structured_tail_(structured_tail) {}

std::unique_ptr<GibbsSolver> GibbsSolver::for_law(const laws::EntryLaw& law,
                                                  num::Tolerances tol) {
    auto phi = [law](double x, double zeta) { return law.log_laplace_shifted(x, zeta); };
    return std::make_unique<GibbsSolver>(phi, law.declared_b(), law.tail_linear(), tol, true);
}

std::atomic<long> g_integral_evals{0};
std::atomic<long> g_ktheta_evals{0};
long debug_integral_evals() { return g_integral_evals.load(); }
long debug_ktheta_evals() { return g_ktheta_evals.load(); }

GibbsSolver::GibbsPair GibbsSolver::integrals(double zeta) const {
    ++g_integral_evals;
    if (!(zeta > 0.5 * b_)) {
        throw DivergentIntegrand("big_g: integral diverges at or below zeta = B/2");
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = pair_cache_.find(zeta);
        if (it != pair_cache_.end()) return it->second;
    }

    const double decay = zeta - 0.5 * b_;
    double radius;
    if (structured_tail_) {
        radius = std::sqrt(46.0 / decay);
        if (tail_linear_ > 0.0) {
            const double lin = tail_linear_;
            radius = std::max(radius,
                              (lin + std::sqrt(lin * lin + 184.0 * zeta)) / (2.0 * zeta));
        }
    } else {
        radius = num::truncation_radius({decay, tail_linear_, 0.0, true});
    }
    auto phi = [&](double x) { return phi_(x, zeta); };

    // Atom-heavy laws at small zeta put the Gibbs mass in a bump away from
    // the origin; locate peaks so quadrature panels start on them and the
    // whole computation runs shifted by the peak value. The bump envelope
    // tops out at lin^2/(4 decay), so probing is only worth it once that
    // exceeds ~100; below, the plain panels resolve everything.
    std::vector<double> splits{0.0, radius};
    if (tail_linear_ > 0.0 && 400.0 * decay < tail_linear_ * tail_linear_) {
        const int n = 64;
        double prev = phi(0.0);
        double cur = phi(radius / n);
        for (int i = 1; i < n; ++i) {
            const double next = phi(radius * (i + 1) / n);
            if (cur > prev && cur >= next) {
                auto r = num::maximize_1d(phi, radius * (i - 1) / n, radius * (i + 1) / n,
                                          tol_, 32);
                splits.push_back(r.argmax);
            }
            prev = cur;
            cur = next;
        }
    }
    std::sort(splits.begin(), splits.end());

    double shift = phi(0.0);
    for (double s : splits) shift = std::max(shift, phi(s));

    PairQuad quad(phi, shift);
    double z = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i + 1 < splits.size(); ++i) {
        const double a = splits[i];
        const double b2 = splits[i + 1];
        if (b2 - a < 1e-300) continue;
        const PairVal v = quad.integrate(a, b2, tol_.quad_rel);
        z += v.z;
        m2 += v.m2;
    }
    if (!quad.converged) throw NonConvergent("big_g: quadrature depth exhausted");
    GibbsPair out{shift + std::log(2.0 * z), m2 / z};

    std::lock_guard<std::mutex> lock(mutex_);
    if (pair_cache_.size() > 200000) pair_cache_.clear();
    pair_cache_.emplace(zeta, out);
    return out;
}

double GibbsSolver::big_g(double zeta) const {
    return integrals(zeta).log_z;
}

double GibbsSolver::big_g_prime(double zeta) const {
    return -integrals(zeta).second_moment;
}

std::optional<double> GibbsSolver::limit_l() const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (l_known_) return l_;
    }
    std::optional<double> result;
    double prev = std::numeric_limits<double>::quiet_NaN();
    bool settled = false;
    for (int k = 1; k <= 40; ++k) {
        const double v = integrals(0.5 * b_ + std::ldexp(1.0, -k)).second_moment;
        if (v > 1e8) {
            result = std::nullopt; // diverges: +infinity marker
            settled = true;
            break;
        }
        if (k > 1 && std::abs(v - prev) <= 1e-5) {
            result = v;
            settled = true;
            break;
        }
        prev = v;
    }
    if (!settled) throw NonStableTail("limit_l: -G' neither stabilized nor diverged");
    std::lock_guard<std::mutex> lock(mutex_);
    l_known_ = true;
    l_ = result;
    return result;
}

double GibbsSolver::boundary_g() const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (g_boundary_) return *g_boundary_;
    }
    // Finite l forces G(B/2) finite; evaluate a hair inside the boundary.
    const double g = big_g(0.5 * b_ + kBoundaryEps);
    std::lock_guard<std::mutex> lock(mutex_);
    g_boundary_ = g;
    return g;
}

double GibbsSolver::zeta_of_c(double c) const {
    if (!(c > 0.0)) throw InvalidParameters("zeta_of_c: requires C > 0");
    const auto l = limit_l();
    if (l && c >= *l) return 0.5 * b_;

    double lo = 0.0;
    double hi = 0.0;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = zeta_cache_.find(c);
        if (it != zeta_cache_.end()) return it->second;
        // zeta_C is decreasing in C, so cache neighbors bracket the root.
        auto up = zeta_cache_.upper_bound(c);
        if (up != zeta_cache_.end()) lo = up->second;
        if (up != zeta_cache_.begin()) hi = std::prev(up)->second;
    }

    auto fn = [&](double zeta) { return c - integrals(zeta).second_moment; };

    const double base = 0.5 * b_;
    if (lo > 0.0 && hi > 0.0 && lo < hi) {
        // Monotonicity makes cached neighbors genuine bounds; widen only by
        // their own root-finding slack.
        const double slack_lo = 1e-9 * lo + 1e-12;
        const double slack_hi = 1e-9 * hi + 1e-12;
        lo = std::max(lo - slack_lo, base + 1e-14);
        hi = hi + slack_hi;
        try {
            const double z = num::find_root(fn, lo, hi, tol_);
            std::lock_guard<std::mutex> lock(mutex_);
            zeta_cache_[c] = z;
            return z;
        } catch (const InvalidBracket&) {
            // stale neighbors; fall through to the cold search
        }
    }

    lo = base + 1e-8;
    while (fn(lo) > 0.0 && lo - base > 1e-14) lo = base + (lo - base) / 16.0;
    hi = base + 1.0;
    int grow = 0;
    while (fn(hi) < 0.0) {
        hi = base + 2.0 * (hi - base);
        if (++grow > 200) throw BracketGrowthFailed("zeta_of_c: no sign change found");
    }
    const double z = num::find_root(fn, lo, hi, tol_);
    std::lock_guard<std::mutex> lock(mutex_);
    zeta_cache_[c] = z;
    return z;
}

double GibbsSolver::r_of_c(double c) const {
    const auto l = limit_l();
    if (l && c >= *l) return 0.5 * b_ * c + boundary_g();
    const double z = zeta_of_c(c);
    return c * z + big_g(z);
}

double GibbsSolver::k_theta(double theta, double alpha) const {
    ++g_ktheta_evals;
    if (!(theta > 0.0)) throw InvalidParameters("k_theta: requires theta > 0");
    if (alpha == 1.0) return theta * theta;
    if (!(alpha > 0.0 && alpha < 1.0)) throw OutOfDomain("k_theta: requires alpha in (0,1]");
    const double c = 4.0 * theta * theta * alpha * (1.0 - alpha);
    return theta * theta * (alpha * alpha + b_ * (1.0 - alpha) * (1.0 - alpha)) + r_of_c(c) -
           0.5 * std::log(1.0 - alpha) - std::log(2.0 * theta) - 0.5 * kLog2Pi - 0.5;
}

double GibbsSolver::k_theta_stationarity(double theta, double alpha) const {
    const double c = 4.0 * theta * theta * alpha * (1.0 - alpha);
    const double zeta = zeta_of_c(c);
    return 2.0 * theta * theta * (alpha + b_ * (alpha - 1.0)) +
           4.0 * theta * theta * zeta * (1.0 - 2.0 * alpha) + 0.5 / (1.0 - alpha);
}

std::vector<std::pair<double, double>> GibbsSolver::zeta_cache_snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return {zeta_cache_.begin(), zeta_cache_.end()};
}

AnnealedF::AnnealedF(laws::EntryLaw law, num::Tolerances tol)
    : law_(std::move(law)), tol_(tol), tails_(laws::tail_constants(law_, tol_)),
      cls_(laws::classify(law_, tails_, tol_)),
      solver_(GibbsSolver::for_law(law_, tol_)) {}

double AnnealedF::small_theta_threshold() const {
    if (tails_.A <= 1.0) return std::numeric_limits<double>::infinity();
    return 0.5 / std::sqrt(tails_.A - 1.0);
}

FProfile AnnealedF::f_increasing(double theta) const {
    if (cls_.tag != laws::RegimeTag::IncreasingPsi) {
        throw WrongRegime(law_.name() + ": f_increasing needs an IncreasingPsi law");
    }
    return f_increasing_uncached(theta);
}

FProfile AnnealedF::f_increasing_uncached(double theta) const {
    FProfile out;
    out.theta = theta;
    out.validity = true;
    if (theta <= small_theta_threshold()) {
        out.value = theta * theta;
        out.regime = FRegime::SmallTheta;
        out.alpha_opt = 1.0;
        return out;
    }

    const double b = tails_.B;
    const GibbsSolver& gs = *solver_;
    const double t2b = theta * theta * (b - 1.0);

    if (t2b > 1.0) {
        const auto l = gs.limit_l();
        double alpha_crit = -1.0;
        if (l && *l <= 1.0 / (b - 1.0)) {
            // zeta saturates at B/2 before the stationarity band: the root
            // alpha_- of P(alpha) is the critical point in closed form.
            alpha_crit = 0.5 * (1.0 - guarded_sqrt(1.0 - 1.0 / t2b));
        } else {
            const double beta_minus =
                (l && *l < theta * theta)
                    ? 0.5 * (1.0 - guarded_sqrt(1.0 - *l / (theta * theta)))
                    : 0.5;
            const double h = 1e-4;
            auto kprime = [&](double a) {
                return (gs.k_theta(theta, a + h) - gs.k_theta(theta, a - h)) / (2.0 * h);
            };
            const double full_lo = std::min(1e-3, 0.25 * beta_minus);
            const double full_hi = beta_minus - 2.0 * h;
            // Continuation: the critical point moves smoothly in theta, so
            // the previous root usually brackets tightly; sign checks keep
            // stale hints harmless.
            double hint;
            {
                std::lock_guard<std::mutex> lock(memo_mutex_);
                hint = alpha_hint_;
            }
            double lo = full_lo;
            double hi = full_hi;
            bool bracketed = false;
            if (hint > 0.0) {
                const double hl = std::max(full_lo, hint - 0.05);
                const double hh = std::min(full_hi, hint + 0.05);
                if (hh > hl && kprime(hl) > 0.0 && kprime(hh) < 0.0) {
                    lo = hl;
                    hi = hh;
                    bracketed = true;
                }
            }
            if (!bracketed && hi > lo) {
                bracketed = kprime(lo) > 0.0 && kprime(hi) < 0.0;
            }
            if (bracketed) {
                num::Tolerances rt = tol_;
                rt.root_abs = 3e-6;
                try {
                    alpha_crit = num::find_root(kprime, lo, hi, rt);
                } catch (const InvalidBracket&) {
                    alpha_crit = num::find_root(kprime, full_lo, full_hi, rt);
                }
                const double resid = gs.k_theta_stationarity(theta, alpha_crit);
                if (std::abs(resid) > 1e-2 * std::max(1.0, theta * theta)) {
                    throw NonConvergent("f_increasing: stationarity cross-check failed");
                }
                std::lock_guard<std::mutex> lock(memo_mutex_);
                alpha_hint_ = alpha_crit;
            }
        }
        if (alpha_crit > 0.0) {
            const double cand = gs.k_theta(theta, alpha_crit);
            out.regime = FRegime::IncreasingPsiStructured;
            if (cand >= theta * theta) {
                out.value = cand;
                out.alpha_opt = alpha_crit;
                out.zeta_opt =
                    gs.zeta_of_c(4.0 * theta * theta * alpha_crit * (1.0 - alpha_crit));
            } else {
                out.value = theta * theta;
                out.alpha_opt = 1.0;
            }
            return out;
        }
    }

    // Structured preconditions failed: brute alpha-grid with the theta^2
    // floor from the alpha -> 1 endpoint. K is smooth here, so a modest
    // grid plus golden refinement resolves the maximum; the value is
    // quadratic around it, so 1e-5 on alpha is ample.
    num::Tolerances gt = tol_;
    gt.opt_abs = 1e-5;
    auto r = num::maximize_1d([&](double a) { return gs.k_theta(theta, a); }, 1e-6, 1.0 - 1e-6,
                              gt, 48);
    out.regime = FRegime::IncreasingPsiGrid;
    if (r.max >= theta * theta) {
        out.value = r.max;
        out.alpha_opt = r.argmax;
        out.zeta_opt = gs.zeta_of_c(4.0 * theta * theta * r.argmax * (1.0 - r.argmax));
    } else {
        out.value = theta * theta;
        out.alpha_opt = 1.0;
    }
    return out;
}

double AnnealedF::compact_explicit_value(double theta) const {
    const double u = theta * theta * (tails_.A - 1.0);
    if (u < 1.0) return -std::numeric_limits<double>::infinity();
    const double root = guarded_sqrt(1.0 - 1.0 / u);
    const double alpha_plus = 0.5 * (1.0 + root);
    return u * alpha_plus * alpha_plus + theta * theta + 0.5 * std::log(1.0 - alpha_plus);
}

FProfile AnnealedF::f_compact(double theta) const {
    if (cls_.tag != laws::RegimeTag::CompactCase) {
        throw WrongRegime(law_.name() + ": f_compact needs a CompactCase law");
    }
    return f_compact_uncached(theta);
}

FProfile AnnealedF::f_compact_uncached(double theta) const {
    FProfile out;
    out.theta = theta;
    if (theta <= small_theta_threshold()) {
        out.value = theta * theta;
        out.regime = FRegime::SmallTheta;
        out.alpha_opt = 1.0;
        out.validity = true;
        return out;
    }

    const double a = tails_.A;
    const double u = theta * theta * (a - 1.0);
    auto v_profile = [&](double al) {
        return u * al * al + theta * theta + 0.5 * std::log(1.0 - al);
    };
    // For u >= 1 the interior maximizer sits in [1/2, 1) and V restricted
    // there is unimodal, while on (0, 1/2) V is bounded by its endpoints;
    // the theta^2 floor carries the alpha -> 0 end. Scanning [1/2, 1) keeps
    // the numeric route sharp even when the interior max barely clears the
    // floor.
    const double grid_lo = u >= 1.0 ? 0.5 : 1e-9;
    auto grid = num::maximize_1d(v_profile, grid_lo, 1.0 - 1e-12, tol_);
    const double grid_value = std::max(theta * theta, grid.max);

    if (u >= 1.0) {
        const double explicit_value = compact_explicit_value(theta);
        const double value = std::max(theta * theta, explicit_value);
        if (std::abs(value - grid_value) > 1e-8 * std::max(1.0, std::abs(value))) {
            throw NonConvergent("f_compact: closed form and V-grid disagree (theta=" +
                                std::to_string(theta) + ", closed=" + std::to_string(value) +
                                ", grid=" + std::to_string(grid_value) + ")");
        }
        out.value = value;
        out.regime = FRegime::CompactExplicit;
        if (explicit_value >= theta * theta) {
            out.alpha_opt = 0.5 * (1.0 + guarded_sqrt(1.0 - 1.0 / u));
        } else {
            out.alpha_opt = 1.0;
        }
        out.validity = theta >= compact_validity_threshold();
        return out;
    }

    out.value = grid_value;
    out.regime = FRegime::CompactGrid;
    out.alpha_opt = grid.max >= theta * theta ? std::optional<double>(grid.argmax)
                                              : std::optional<double>(1.0);
    out.validity = false;
    return out;
}

double AnnealedF::compact_validity_threshold() const {
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        if (compact_threshold_) return *compact_threshold_;
    }
    // Smallest theta from which the closed form dominates theta^2; the
    // formula only represents F from some theta_0 onward, so everything
    // below is flagged validity=false.
    auto above = [&](double t) {
        return compact_explicit_value(t) > t * t + kFloorSlack;
    };
    double lo = std::max(small_theta_threshold(), 1.0 / std::sqrt(tails_.A - 1.0));
    double hi = 10.0 * std::max(1.0, 1.0 / std::sqrt(tails_.A - 1.0));
    int grow = 0;
    while (!above(hi)) {
        hi *= 2.0;
        if (++grow > 60) throw BracketGrowthFailed("compact threshold: predicate never fires");
    }
    while (hi - lo > 1e-9 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    std::lock_guard<std::mutex> lock(memo_mutex_);
    compact_threshold_ = hi;
    return hi;
}

FProfile AnnealedF::value(double theta) const {
    if (theta < 0.0) throw InvalidParameters("f_value: requires theta >= 0");
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find(theta);
        if (it != memo_.end()) return it->second;
    }

    FProfile out;
    switch (cls_.tag) {
        case laws::RegimeTag::SharpSubGaussian:
            out.theta = theta;
            out.value = theta * theta;
            out.regime = FRegime::SmallTheta;
            out.alpha_opt = 1.0;
            out.validity = true;
            break;
        case laws::RegimeTag::IncreasingPsi:
            out = f_increasing_uncached(theta);
            break;
        case laws::RegimeTag::CompactCase:
            out = f_compact_uncached(theta);
            break;
        case laws::RegimeTag::Unclassified:
            out.theta = theta;
            out.value = theta * theta;
            out.value_high = tails_.A * theta * theta;
            out.regime = FRegime::UpperBoundOnly;
            out.validity = false;
            break;
    }

    std::lock_guard<std::mutex> lock(memo_mutex_);
    if (memo_.size() > 200000) memo_.clear();
    memo_.emplace(theta, out);
    return out;
}

std::optional<double> AnnealedF::theta_zero() const {
    if (cls_.tag == laws::RegimeTag::SharpSubGaussian) return std::nullopt;
    if (cls_.tag == laws::RegimeTag::Unclassified) {
        throw WrongRegime(law_.name() + ": theta_zero needs a classified law");
    }
    auto above = [&](double t) { return value(t).value > t * t + kFloorSlack; };
    double lo = small_theta_threshold();
    double hi = 10.0 * std::max(1.0, 1.0 / std::sqrt(tails_.A - 1.0));
    int grow = 0;
    while (!above(hi)) {
        hi *= 2.0;
        if (++grow > 60) throw BracketGrowthFailed("theta_zero: predicate never fires");
    }
    while (hi - lo > 1e-7 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    return hi;
}

} // namespace wldp::annealed
