#pragma once
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "wldp/laws.hpp"
#include "wldp/numerics.hpp"

namespace wldp::annealed {

enum class FRegime {
    SmallTheta,
    IncreasingPsiStructured,
    IncreasingPsiGrid,
    CompactExplicit,
    CompactGrid,
    UpperBoundOnly,
};

const char* f_regime_name(FRegime r);

struct FProfile {
    double theta = 0.0;
    double value = 0.0;
    FRegime regime = FRegime::SmallTheta;
    std::optional<double> alpha_opt;
    std::optional<double> zeta_opt;
    bool validity = true;
    // Unclassified laws only: the companion A theta^2 upper bound, so the
    // caller sees the whole provable bracket [theta^2, A theta^2].
    std::optional<double> value_high;
};

/**
 * Gibbs-measure solver behind the annealed spherical integral:
 *
 *   G(zeta)   = log int exp(L(x) - zeta x^2) dx        (zeta > B/2)
 *   zeta_C    : G'(zeta_C) = -C, the tilted variance-C parameter
 *   R(C)      = C zeta_C + G(zeta_C)
 *   K_theta   : the alpha-profile functional whose sup over (0,1] is F.
 *
 * Integrands are handled in log-shifted form around their interior peak, so
 * atom-dominated laws at small zeta do not overflow. zeta_C lookups keep a
 * monotone cache whose neighbors seed later root brackets.
 */
class GibbsSolver {
public:
    // phi(x, zeta) = L(x) - zeta x^2, supplied in a cancellation-free form.
    using ShiftedLogLaplace = std::function<double(double, double)>;

    // structured_tail: the exponent splits into a Gaussian component of
    // curvature B/2 and atom components of slope <= tail_linear decaying at
    // the full zeta rate, which keeps truncation radii tight. Raw custom
    // transforms leave it false and get the single conservative envelope.
    GibbsSolver(ShiftedLogLaplace phi, double b, double tail_linear,
                num::Tolerances tol = {}, bool structured_tail = false);
    static std::unique_ptr<GibbsSolver> for_law(const laws::EntryLaw& law,
                                                num::Tolerances tol = {});

    double b() const { return b_; }

    double big_g(double zeta) const;
    double big_g_prime(double zeta) const;

    // l = -lim_{zeta -> B/2} G'(zeta); nullopt is the +infinity marker.
    std::optional<double> limit_l() const;

    double zeta_of_c(double c) const;
    double r_of_c(double c) const;
    double k_theta(double theta, double alpha) const;

    // Analytic first-order condition for the critical alpha (cross-check of
    // the finite-difference optimizer path).
    double k_theta_stationarity(double theta, double alpha) const;

    std::vector<std::pair<double, double>> zeta_cache_snapshot() const;

private:
    struct GibbsPair {
        double log_z;         // log int exp(L - zeta x^2) over the line
        double second_moment; // int x^2 dnu_zeta
    };
    GibbsPair integrals(double zeta) const;
    double boundary_g() const;

    ShiftedLogLaplace phi_;
    double b_;
    double tail_linear_;
    num::Tolerances tol_;
    bool structured_tail_;

    mutable std::mutex mutex_;
    mutable std::map<double, double> zeta_cache_;
    mutable std::unordered_map<double, GibbsPair> pair_cache_;
    mutable bool l_known_ = false;
    mutable std::optional<double> l_;
    mutable std::optional<double> g_boundary_;
};

/**
 * Per-law F(theta) evaluation: classification-driven dispatch between the
 * small-theta identity, the increasing-psi optimizer, the compact-case
 * closed form, and the upper-bound-only bracket.
 */
class AnnealedF {
public:
    explicit AnnealedF(laws::EntryLaw law, num::Tolerances tol = {});

    const laws::EntryLaw& law() const { return law_; }
    const laws::TailConstants& tails() const { return tails_; }
    const laws::LawClassification& classification() const { return cls_; }
    const GibbsSolver& solver() const { return *solver_; }

    // theta below which F(theta) = theta^2 holds for every law with this A;
    // +infinity when A = 1.
    double small_theta_threshold() const;

    FProfile f_increasing(double theta) const;
    FProfile f_compact(double theta) const;
    FProfile value(double theta) const; // dispatcher, memoized per theta

    // inf{theta : F(theta) > theta^2}; nullopt when the predicate never
    // fires (sharp sub-Gaussian laws).
    std::optional<double> theta_zero() const;

    // Operational compact-case validity threshold (the explicit formula
    // must dominate theta^2 from here on).
    double compact_validity_threshold() const;

private:
    FProfile f_increasing_uncached(double theta) const;
    FProfile f_compact_uncached(double theta) const;
    double compact_explicit_value(double theta) const;

    laws::EntryLaw law_;
    num::Tolerances tol_;
    laws::TailConstants tails_;
    laws::LawClassification cls_;
    std::unique_ptr<GibbsSolver> solver_;

    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<double, FProfile> memo_;
    mutable std::optional<double> compact_threshold_;
    mutable double alpha_hint_ = -1.0;
};

} // namespace wldp::annealed
